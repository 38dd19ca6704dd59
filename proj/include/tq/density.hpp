#pragma once
#include "tq/modcurves.hpp"

namespace tq {

// Bit ordering of quadratic fields: index n = (a_k ... a_0) in binary where
// a_0 is the sign of d, a_1 the exponent of 2, and a_j (j >= 2) the exponent
// of the j-th prime (slot j holds the (j-1)-th entry of 2, 3, 5, 7, ...).
// A bijection between squarefree d (d not 0 or 1) and the positive integers.
Int psi(const Int& d);
Int psi_inverse(const Int& n);

struct DensityResult {
    long t = 0;
    long N_t = 0;  // fields with index <= t meeting at least one exclusion condition
    long A_t = 0;  // = t, the number of fields scanned
    long c_i = 0, c_ii = 0, c_iii = 0;  // per-condition counts (not first-match)
    double ratio = 0;                   // N_t / A_t
    double frac_i = 0, frac_ii = 0, frac_iii = 0;
};

// Scan the first t fields in the bit ordering and count how many satisfy the
// order-18 exclusion conditions. Chunked across threads (0 = hardware
// default); totals are merged in chunk order and deterministic.
DensityResult density_scan(long t, int threads = 0);

}  // namespace tq
