#pragma once
#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "tq/ffield.hpp"
#include "tq/qfield.hpp"

namespace tq {

inline QuadElem from_int_like(const QuadElem& sample, long v) {
    return QuadElem(Rat(v), Rat(0), sample.d);
}
inline Fq from_int_like(const Fq& sample, long v) { return fq_from_int(sample, v); }

// Z/m + Z/n with m | n (m = 1 for cyclic groups).
struct TorsionGroup {
    int m = 1, n = 1;
    long order() const { return (long)m * n; }
    bool operator==(const TorsionGroup& o) const = default;
    std::string str() const;
};

// The 26 groups possible over a quadratic field.
const std::vector<TorsionGroup>& theorem1_groups();
bool in_theorem1_list(const TorsionGroup& g);
// g is a subgroup of some group in the list (componentwise divisibility).
bool subgroup_of_theorem1(const TorsionGroup& g);

template <class F>
struct ECurve {
    F a1, a2, a3, a4, a6;
    F b2_, b4_, b6_, b8_, disc_;

    ECurve(const F& A1, const F& A2, const F& A3, const F& A4, const F& A6)
        : a1(A1), a2(A2), a3(A3), a4(A4), a6(A6),
          b2_(A1), b4_(A1), b6_(A1), b8_(A1), disc_(A1) {
        F four = from_int_like(a1, 4), two = from_int_like(a1, 2);
        b2_ = a1 * a1 + four * a2;
        b4_ = two * a4 + a1 * a3;
        b6_ = a3 * a3 + four * a6;
        b8_ = a1 * a1 * a6 + four * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        F nine = from_int_like(a1, 9), eight = from_int_like(a1, 8),
          twenty7 = from_int_like(a1, 27);
        disc_ = from_int_like(a1, 0) - b2_ * b2_ * b8_ - eight * b4_ * b4_ * b4_ -
                twenty7 * b6_ * b6_ + nine * b2_ * b4_ * b6_;
    }

    const F& b2() const { return b2_; }
    const F& b4() const { return b4_; }
    const F& b6() const { return b6_; }
    const F& b8() const { return b8_; }
    const F& disc() const { return disc_; }
    bool is_singular() const { return disc_.is_zero(); }

    F rhs(const F& x) const { return ((x + a2) * x + a4) * x + a6; }
};

template <class F>
using EPoint = std::optional<std::pair<F, F>>;  // nullopt = point at infinity

template <class F>
bool on_curve(const ECurve<F>& E, const EPoint<F>& P) {
    if (!P) return true;
    const F& x = P->first;
    const F& y = P->second;
    return (y * y + E.a1 * x * y + E.a3 * y - E.rhs(x)).is_zero();
}

template <class F>
EPoint<F> ec_neg(const ECurve<F>& E, const EPoint<F>& P) {
    if (!P) return std::nullopt;
    const F& x = P->first;
    const F& y = P->second;
    return std::make_pair(x, from_int_like(x, 0) - y - E.a1 * x - E.a3);
}

template <class F>
EPoint<F> ec_add(const ECurve<F>& E, const EPoint<F>& P, const EPoint<F>& Q) {
    if (!P) return Q;
    if (!Q) return P;
    const F &x1 = P->first, &y1 = P->second, &x2 = Q->first, &y2 = Q->second;
    F lam = from_int_like(x1, 0);
    if (x1 == x2) {
        // Q = -P?
        if ((y1 + y2 + E.a1 * x1 + E.a3).is_zero()) return std::nullopt;
        F two = from_int_like(x1, 2), three = from_int_like(x1, 3);
        lam = (three * x1 * x1 + two * E.a2 * x1 + E.a4 - E.a1 * y1) /
              (two * y1 + E.a1 * x1 + E.a3);
    } else {
        lam = (y2 - y1) / (x2 - x1);
    }
    F x3 = lam * lam + E.a1 * lam - E.a2 - x1 - x2;
    F y3 = lam * (x1 - x3) - y1 - E.a1 * x3 - E.a3;
    return std::make_pair(x3, y3);
}

template <class F>
EPoint<F> ec_scalar(const ECurve<F>& E, long n, EPoint<F> P) {
    if (n < 0) { n = -n; P = ec_neg(E, P); }
    EPoint<F> acc = std::nullopt;
    while (n > 0) {
        if (n & 1) acc = ec_add(E, acc, P);
        P = ec_add(E, P, P);
        n >>= 1;
    }
    return acc;
}

constexpr int kOverCap = -1;

// Smallest n <= cap with nP = infinity, else kOverCap (-1).
template <class F>
int point_order(const ECurve<F>& E, const EPoint<F>& P, int cap = 24) {
    if (!on_curve(E, P)) throw std::invalid_argument("point_order: point not on curve");
    EPoint<F> acc = P;
    for (int n = 1; n <= cap; ++n) {
        if (!acc) return n;
        acc = ec_add(E, acc, P);
    }
    return kOverCap;
}

template <class F>
std::vector<EPoint<F>> subgroup_closure(const ECurve<F>& E,
                                        const std::vector<EPoint<F>>& gens) {
    std::vector<EPoint<F>> elems;
    elems.push_back(std::nullopt);
    auto contains = [&](const EPoint<F>& P) {
        return std::find(elems.begin(), elems.end(), P) != elems.end();
    };
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& g : gens)
            for (size_t i = 0; i < elems.size(); ++i) {
                EPoint<F> s = ec_add(E, elems[i], g);
                if (!contains(s)) {
                    elems.push_back(s);
                    grew = true;
                }
            }
    }
    return elems;
}

// Invariant factors (m, n), m | n, of an abelian group of rank <= 2 given as a
// full list of elements.
template <class F>
TorsionGroup group_structure(const ECurve<F>& E, const std::vector<EPoint<F>>& elems) {
    long N = (long)elems.size();
    int expo = 1;
    for (const auto& P : elems) {
        int o = point_order(E, P, (int)N);
        if (o == kOverCap) throw std::logic_error("group_structure: order exceeds group size");
        expo = (int)std::lcm((long)expo, (long)o);
    }
    if (N % expo != 0) throw std::logic_error("group_structure: exponent does not divide order");
    TorsionGroup g{(int)(N / expo), expo};
    if (g.n % g.m != 0) throw std::logic_error("group_structure: not rank <= 2");
    return g;
}

// Exhaustive count over F_q (odd q), including the point at infinity.
long count_points_elliptic(const ECurve<Fq>& E);

struct ReduceResult {
    std::optional<ECurve<Fq>> curve;  // empty on failure
    std::string why;                  // "singular" / "p2_refused" when empty
    int rescale_k = 0;                // model was rescaled by u = p^k
};

// Coefficient-wise reduction of E/Q(sqrt d) through ctx, after clearing
// denominators with a (u = p^k; 0,0,0)-rescaling when needed.
ReduceResult reduce_at(const ECurve<QuadElem>& E, const ReductionContext& ctx);

// Image of a point under reduce_at's model map; outer nullopt = denominator
// obstruction (coordinates not expressible in the residue field).
std::optional<EPoint<Fq>> reduce_point(const ECurve<QuadElem>& E, const ReductionContext& ctx,
                                       const EPoint<QuadElem>& P);

// First `want` odd primes <= bound with good reduction.
std::vector<long> usable_primes(const ECurve<QuadElem>& E, long bound, size_t want);

// B with |E(Q(sqrt d))_tors| dividing B: for each prime l, the exponent of l
// in B is min over usable p != l of v_l(#E(F_q)). Needs >= 2 distinct odd
// usable primes; p = 2 in the list is an error.
long torsion_bound(const ECurve<QuadElem>& E, const std::vector<long>& primes);

struct CertifyConfig {
    long umax = 50, vmax = 50, wmax = 64;
    bool refine = true;
    long refine_prime_bound = 120;
};

struct TorsionCertificate {
    TorsionGroup lower;
    long upper_order = 0;    // torsion_bound over the default prime policy
    long refined_upper = 0;  // after 2-torsion count and reduction-embedding elimination
    bool exact = false;      // |lower| == refined_upper
    std::vector<EPoint<QuadElem>> points;  // the certified subgroup
    std::vector<long> bound_primes;
    std::vector<std::string> notes;
};

// All affine points of E(K) found in the box x = (u + v sqrt d)/w, |u| <= umax,
// |v| <= vmax, 1 <= w <= wmax (gcd-canonical triples), with cheap character
// screens mod a few good primes before the exact square test. No order filter.
std::vector<EPoint<QuadElem>> box_scan_points(const ECurve<QuadElem>& E,
                                              const CertifyConfig& cfg = {},
                                              const std::vector<long>& screen_primes = {});

TorsionCertificate torsion_certify(const ECurve<QuadElem>& E,
                                   const std::vector<EPoint<QuadElem>>& candidate_points,
                                   const CertifyConfig& cfg = {});

int vl(long n, long l);  // exponent of prime l in n > 0

}  // namespace tq
