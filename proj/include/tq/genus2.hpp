#pragma once
#include <vector>
#include "tq/ffield.hpp"
#include "tq/qfield.hpp"

namespace tq {

using Poly = std::vector<Int>;  // ascending coefficients, integer model

int poly_deg(const Poly& f);
// discriminant of f as a polynomial of its exact degree (Sylvester resultant
// with f', fraction-free integer elimination)
Int poly_disc(const Poly& f);
// p odd, p does not divide the leading coefficient nor disc(f)
bool good_reduction_hyper(const Poly& f, long p);

// Projective points of the smooth model of y^2 = f(x) over F_{p^ext}
// (ext 1 or 2): affine solutions plus points at infinity (odd degree: 1;
// even degree: 2 or 0 by the quadratic character of the leading coefficient).
// Degrees 3..6 accepted so the genus-1 bridge shares this code path.
long count_hyper_points(const Poly& f, long p, int ext);
// same count over F_{p^4}; consistency helper for base-change checks
long count_hyper_points_ext4(const Poly& f, long p);

// P(T) = 1 + c1 T + c2 T^2 + q c1 T^3 + q^2 T^4 over base field F_q
struct ZetaNumerator {
    long q = 0;
    long c1 = 0, c2 = 0;
};
// reconstruct from point counts n1 = #C(F_q), n2 = #C(F_{q^2}); throws on
// non-integral c2 or violated Weil bounds
ZetaNumerator zeta_from_counts(long n1, long n2, long q);
long weil_P1(const ZetaNumerator& z);   // P(1)
long weil_Pm1(const ZetaNumerator& z);  // P(-1)

long jacobian_order(const Poly& f, long p);      // |J(F_p)| = P(1)
long jacobian_order_ext(const Poly& f, long p);  // |J(F_{p^2})| = P(1) P(-1)

// B with |J(K)_tors| dividing B; splitting of each usable prime selects the
// base-field or extension-field Jacobian order; same prime-to-p exponent
// policy as ellcurve::torsion_bound. Empty list = first 8 usable odd <= 60.
long jacobian_torsion_gcd_bound(const Poly& f, const QuadField& K,
                                std::vector<long> primes = {});

}  // namespace tq
