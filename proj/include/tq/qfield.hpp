#pragma once
#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include "json.hpp"

namespace tq {

using Int = mpz_class;
using Rat = mpq_class;

// n = c^2 * d with d squarefree, sign(d) = sign(n). Trial division, |n| <= 10^12.
std::pair<Int, Int> squarefree_reduce(const Int& n);

// d for d = 1 (mod 4), else 4d. Requires squarefree d, d not in {0, 1}.
Int field_discriminant(const Int& d);

// Kronecker symbol (a/n), n != 0.
int kronecker(const Int& a, const Int& n);

enum class SplitType { SPLIT, INERT, RAMIFIED };

const char* split_name(SplitType s);

// Q(sqrt(d)) for squarefree d. d = 1 is allowed and denotes Q itself
// (used for base-field computations); field_discriminant still rejects it.
struct QuadField {
    Int d;
    Int disc;
    explicit QuadField(const Int& d_);
};

SplitType splitting_type(const QuadField& K, const Int& p);

// a + b*sqrt(d). Equality is componentwise; rationals are kept canonical.
// Over d = 1 the sqrt part is folded into a, so b = 0 always.
struct QuadElem {
    Rat a, b;
    Int d;

    QuadElem(const Rat& a_, const Rat& b_, const Int& d_);
    explicit QuadElem(const Rat& a_, const Int& d_) : QuadElem(a_, Rat(0), d_) {}

    bool is_zero() const { return a == 0 && b == 0; }
    QuadElem conj() const { return QuadElem(a, -b, d); }
    Rat norm() const { return a * a - Rat(d) * b * b; }
    Rat trace() const { return 2 * a; }
    std::string str() const;

    QuadElem operator-() const { return QuadElem(-a, -b, d); }
    bool operator==(const QuadElem& o) const { return d == o.d && a == o.a && b == o.b; }
    bool operator!=(const QuadElem& o) const { return !(*this == o); }
};

QuadElem operator+(const QuadElem& x, const QuadElem& y);
QuadElem operator-(const QuadElem& x, const QuadElem& y);
QuadElem operator*(const QuadElem& x, const QuadElem& y);
QuadElem operator/(const QuadElem& x, const QuadElem& y);

// Square root of a rational, if it is a perfect square (nonnegative root).
std::optional<Rat> rat_sqrt(const Rat& x);

// Square root of x inside Q(sqrt(d)), if one exists there.
std::optional<QuadElem> sqrt_in_K(const QuadElem& x);

// Residue target for a prime of Q(sqrt(d)) over p: F_p with a stored image of
// sqrt(d) for split/ramified p, F_{p^2} for inert p.
struct ReductionContext {
    long p;
    SplitType st;
    long s;  // image of sqrt(d) mod p; unused for INERT
};

ReductionContext reduction_context(const QuadField& K, long p);

// min(r, p-r) with r^2 = a (mod p), or nullopt. Brute scan; primes here are tiny.
std::optional<long> sqrt_mod_p_scan(long a, long p);

nlohmann::json qelem_to_json(const QuadElem& x);
QuadElem qelem_from_json(const nlohmann::json& j);

}  // namespace tq
