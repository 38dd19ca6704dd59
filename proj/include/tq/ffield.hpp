#pragma once
#include <optional>
#include <stdexcept>
#include <vector>

namespace tq {

// Element of F_p (deg 1) or F_{p^2} = F_p(w), w^2 = t (deg 2), with t the
// smallest positive quadratic non-residue mod p. Value semantics throughout.
struct Fq {
    long a = 0, b = 0;
    long p = 0;
    long t = 0;
    int deg = 1;

    static Fq fp(long p, long v);
    static Fq fp2(long p, long a, long b);

    bool is_zero() const { return a == 0 && b == 0; }
    long q() const { return deg == 1 ? p : p * p; }

    bool operator==(const Fq& o) const = default;
};

long smallest_nonresidue(long p);  // p odd prime; p = 2 unsupported

Fq operator+(const Fq& x, const Fq& y);
Fq operator-(const Fq& x, const Fq& y);
Fq operator-(const Fq& x);
Fq operator*(const Fq& x, const Fq& y);
Fq operator/(const Fq& x, const Fq& y);

Fq fq_pow(Fq x, long long e);
Fq fq_inv(const Fq& x);
Fq fq_frobenius(const Fq& x);  // x -> x^p

// Quadratic character: 0 on zero, else +-1.
int fq_chi(const Fq& x);

// Tonelli-Shanks in F_p or F_{p^2}. Deterministic canonical root:
// min(r, -r) ordering by (b, a) with components in [0, p).
std::optional<Fq> fq_sqrt(const Fq& x);

// min(r, p-r) with r^2 = a (mod p), for odd p.
std::optional<long> sqrt_mod_p(long a, long p);

// All q elements of the field containing sample (same p, deg).
std::vector<Fq> fq_all(const Fq& sample);

Fq fq_zero_like(const Fq& x);
Fq fq_from_int(const Fq& sample, long v);

}  // namespace tq
