#include "tq/genus2.hpp"
#include <climits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <tuple>
#include "tq/ellcurve.hpp"

namespace tq {

int poly_deg(const Poly& f) {
    for (int i = (int)f.size() - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

namespace {

// determinant of an integer matrix, fraction-free (Bareiss)
Int int_det(std::vector<std::vector<Int>> m) {
    size_t n = m.size();
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                Int num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = num;
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

long is_prime_l(long n) {
    if (n < 2) return false;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

std::vector<std::pair<long, int>> factor_l(long n) {
    std::vector<std::pair<long, int>> f;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            int e = 0;
            while (n % q == 0) { n /= q; ++e; }
            f.push_back({q, e});
        }
    if (n > 1) f.push_back({n, 1});
    return f;
}

long coeff_mod(const Int& c, long p) {
    return (long)mpz_fdiv_ui(c.get_mpz_t(), (unsigned long)p);
}

Fq eval_poly(const Poly& f, const Fq& x) {
    Fq acc = from_int_like(x, 0);
    for (int i = poly_deg(f); i >= 0; --i)
        acc = acc * x + from_int_like(x, coeff_mod(f[i], x.p));
    return acc;
}

std::mutex count_mu;
std::map<std::tuple<Poly, long, int>, long> count_memo;

// quartic extension of F_p as F_{p^2}[u]/(u^2 - T), T a nonresidue of F_{p^2}
struct F4 {
    Fq a, b;
};
F4 f4_mul(const F4& x, const F4& y, const Fq& T) {
    return {x.a * y.a + T * x.b * y.b, x.a * y.b + x.b * y.a};
}
int f4_chi(F4 x, const Fq& T) {
    if (x.a.is_zero() && x.b.is_zero()) return 0;
    long long q = (long long)x.a.q() * x.a.q();  // p^4
    long long e = (q - 1) / 2;
    F4 r{from_int_like(T, 1), from_int_like(T, 0)};
    while (e > 0) {
        if (e & 1) r = f4_mul(r, x, T);
        x = f4_mul(x, x, T);
        e >>= 1;
    }
    if (r.b.is_zero() && r.a == from_int_like(T, 1)) return 1;
    return -1;
}

}  // namespace

Int poly_disc(const Poly& f) {
    int n = poly_deg(f);
    if (n < 2) throw std::invalid_argument("poly_disc: degree too small");
    // derivative
    Poly g(n);
    for (int i = 1; i <= n; ++i) g[i - 1] = i * f[i];
    int m = poly_deg(g);
    if (m < 0) return 0;
    // Sylvester matrix of f (deg n) and g (deg m), size n + m
    size_t sz = n + m;
    std::vector<std::vector<Int>> M(sz, std::vector<Int>(sz, Int(0)));
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) M[r][r + j] = f[n - j];
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) M[m + r][r + j] = g[m - j];
    Int res = int_det(M);
    Int disc;
    mpz_divexact(disc.get_mpz_t(), res.get_mpz_t(), f[n].get_mpz_t());
    long s = ((long)n * (n - 1) / 2) % 2;
    return s ? Int(-disc) : disc;
}

bool good_reduction_hyper(const Poly& f, long p) {
    if (p == 2 || !is_prime_l(p)) return false;
    int n = poly_deg(f);
    if (n < 3) return false;
    if (coeff_mod(f[n], p) == 0) return false;
    return coeff_mod(poly_disc(f), p) != 0;
}

long count_hyper_points(const Poly& f, long p, int ext) {
    if (ext != 1 && ext != 2) throw std::invalid_argument("count_hyper_points: ext must be 1 or 2");
    int n = poly_deg(f);
    if (n < 3 || n > 6) throw std::invalid_argument("count_hyper_points: degree must be 3..6");
    if (!good_reduction_hyper(f, p))
        throw std::invalid_argument("count_hyper_points: singular reduction");
    {
        std::lock_guard<std::mutex> lk(count_mu);
        auto it = count_memo.find({f, p, ext});
        if (it != count_memo.end()) return it->second;
    }
    Fq sample = ext == 1 ? Fq::fp(p, 0) : Fq::fp2(p, 0, 0);
    long cnt = 0;
    for (const Fq& x : fq_all(sample)) cnt += 1 + fq_chi(eval_poly(f, x));
    if (n % 2 == 1) {
        cnt += 1;
    } else {
        Fq lead = from_int_like(sample, coeff_mod(f[n], p));
        cnt += 1 + fq_chi(lead);
    }
    {
        std::lock_guard<std::mutex> lk(count_mu);
        count_memo[{f, p, ext}] = cnt;
    }
    return cnt;
}

long count_hyper_points_ext4(const Poly& f, long p) {
    int n = poly_deg(f);
    if (n < 3 || n > 6) throw std::invalid_argument("count_hyper_points_ext4: degree must be 3..6");
    if (!good_reduction_hyper(f, p))
        throw std::invalid_argument("count_hyper_points_ext4: singular reduction");
    Fq sample = Fq::fp2(p, 0, 0);
    // nonresidue of F_{p^2}
    Fq T = sample;
    bool found = false;
    for (const Fq& x : fq_all(sample))
        if (fq_chi(x) == -1) { T = x; found = true; break; }
    if (!found) throw std::logic_error("count_hyper_points_ext4: no nonresidue");
    long cnt = 0;
    for (const Fq& a : fq_all(sample))
        for (const Fq& b : fq_all(sample)) {
            F4 x{a, b};
            F4 acc{from_int_like(sample, 0), from_int_like(sample, 0)};
            for (int i = n; i >= 0; --i) {
                acc = f4_mul(acc, x, T);
                acc.a = acc.a + from_int_like(sample, coeff_mod(f[i], p));
            }
            cnt += 1 + f4_chi(acc, T);
        }
    if (n % 2 == 1) {
        cnt += 1;
    } else {
        F4 lead{from_int_like(sample, coeff_mod(f[n], p)), from_int_like(sample, 0)};
        cnt += 1 + f4_chi(lead, T);
    }
    return cnt;
}

ZetaNumerator zeta_from_counts(long n1, long n2, long q) {
    ZetaNumerator z;
    z.q = q;
    z.c1 = n1 - (q + 1);
    long s1 = -z.c1, s2 = (long)q * q + 1 - n2;
    long num = s1 * s1 - s2;
    if (num % 2 != 0) throw std::invalid_argument("zeta_from_counts: c2 not integral");
    z.c2 = num / 2;
    // Weil bounds
    if ((long long)z.c1 * z.c1 > 16LL * q)
        throw std::invalid_argument("zeta_from_counts: |c1| exceeds Weil bound");
    long long W = (long long)q * q + 6LL * q + 1;
    for (long P : {weil_P1(z), weil_Pm1(z)}) {
        if (P <= 0) throw std::invalid_argument("zeta_from_counts: P not positive");
        long long dlt = P - W;
        if (dlt * dlt > 16LL * q * (q + 1) * (q + 1))
            throw std::invalid_argument("zeta_from_counts: P outside Weil window");
    }
    return z;
}

long weil_P1(const ZetaNumerator& z) {
    return 1 + z.c1 + z.c2 + z.q * z.c1 + (long)z.q * z.q;
}

long weil_Pm1(const ZetaNumerator& z) {
    return 1 - z.c1 + z.c2 - z.q * z.c1 + (long)z.q * z.q;
}

long jacobian_order(const Poly& f, long p) {
    long n1 = count_hyper_points(f, p, 1), n2 = count_hyper_points(f, p, 2);
    return weil_P1(zeta_from_counts(n1, n2, p));
}

long jacobian_order_ext(const Poly& f, long p) {
    long n1 = count_hyper_points(f, p, 1), n2 = count_hyper_points(f, p, 2);
    ZetaNumerator z = zeta_from_counts(n1, n2, p);
    return weil_P1(z) * weil_Pm1(z);
}

long jacobian_torsion_gcd_bound(const Poly& f, const QuadField& K, std::vector<long> primes) {
    if (primes.empty()) {
        for (long p = 3; p <= 60 && primes.size() < 8; p += 2)
            if (is_prime_l(p) && good_reduction_hyper(f, p)) primes.push_back(p);
    }
    std::set<long> seen;
    std::vector<std::pair<long, long>> counts;
    for (long p : primes) {
        if (p == 2) throw std::invalid_argument("jacobian_torsion_gcd_bound: p = 2 not usable");
        if (!is_prime_l(p)) throw std::invalid_argument("jacobian_torsion_gcd_bound: bad prime");
        if (!seen.insert(p).second) continue;
        if (!good_reduction_hyper(f, p)) continue;
        long N = splitting_type(K, p) == SplitType::INERT ? jacobian_order_ext(f, p)
                                                         : jacobian_order(f, p);
        counts.push_back({p, N});
    }
    if (counts.size() < 2)
        throw std::runtime_error("jacobian_torsion_gcd_bound: fewer than 2 usable primes");
    std::set<long> ells;
    for (auto& [p, N] : counts)
        for (auto& [l, e] : factor_l(N)) ells.insert(l);
    long B = 1;
    for (long l : ells) {
        int e = INT_MAX;
        for (auto& [p, N] : counts)
            if (p != l) e = std::min(e, vl(N, l));
        if (e == INT_MAX) e = 0;
        for (int i = 0; i < e; ++i) B *= l;
    }
    return B;
}

}  // namespace tq
