#include "tq/density.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tq {

namespace {

// ascending prime cache; growth is single-threaded, density_scan warms it
// before spawning read-only workers
std::vector<Int>& prime_cache() {
    static std::vector<Int> v{Int(2)};
    return v;
}

const Int& prime_at(size_t i) {
    auto& v = prime_cache();
    while (v.size() <= i) {
        Int nx;
        mpz_nextprime(nx.get_mpz_t(), v.back().get_mpz_t());
        v.push_back(nx);
    }
    return v[i];
}

void ensure_count(size_t k) {
    if (k) prime_at(k - 1);
}

size_t prime_index_of(const Int& p) {
    auto& v = prime_cache();
    while (v.back() < p) {
        Int nx;
        mpz_nextprime(nx.get_mpz_t(), v.back().get_mpz_t());
        v.push_back(nx);
    }
    auto it = std::lower_bound(v.begin(), v.end(), p);
    if (it == v.end() || *it != p) throw std::logic_error("prime_index_of: not a prime");
    return (size_t)(it - v.begin());
}

}  // namespace

Int psi(const Int& d) {
    if (d == 0 || d == 1)
        throw std::invalid_argument("psi: d must be a squarefree integer other than 0 and 1");
    Int n(0), m(abs(d));
    if (d < 0) mpz_setbit(n.get_mpz_t(), 0);
    for (size_t i = 0;; ++i) {
        const Int& p = prime_at(i);
        if (Int(p * p) > m) break;
        if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            if (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t()))
                throw std::invalid_argument("psi: d is not squarefree");
            mpz_setbit(n.get_mpz_t(), i + 1);
        }
    }
    // whatever survives trial division is a single prime factor
    if (m > 1) mpz_setbit(n.get_mpz_t(), prime_index_of(m) + 1);
    return n;
}

Int psi_inverse(const Int& n) {
    if (n < 1) throw std::invalid_argument("psi_inverse: n must be positive");
    Int d(1);
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (size_t j = 0; j < bits; ++j) {
        if (!mpz_tstbit(n.get_mpz_t(), j)) continue;
        if (j == 0)
            d = -d;
        else
            d *= prime_at(j - 1);
    }
    return d;
}

DensityResult density_scan(long t, int threads) {
    if (t < 1) throw std::invalid_argument("density_scan: t must be positive");
    ensure_count(mpz_sizeinbase(Int(t).get_mpz_t(), 2));

    int nw = threads > 0 ? threads
                         : (int)std::max(1u, std::thread::hardware_concurrency());
    long chunk = std::max(1L, (t + nw - 1) / nw);

    struct Counts {
        long any = 0, i = 0, ii = 0, iii = 0;
    };
    std::vector<std::future<Counts>> futs;
    for (long lo = 1; lo <= t; lo += chunk) {
        long hi = std::min(t, lo + chunk - 1);
        futs.push_back(std::async(std::launch::async, [lo, hi] {
            Counts c;
            for (long n = lo; n <= hi; ++n) {
                QuadField K(psi_inverse(Int(n)));
                bool a = km_satisfies(K, KMCondition::I);
                bool b = km_satisfies(K, KMCondition::II);
                bool e = km_satisfies(K, KMCondition::III);
                if (a || b || e) ++c.any;
                c.i += a;
                c.ii += b;
                c.iii += e;
            }
            return c;
        }));
    }

    DensityResult r;
    r.t = r.A_t = t;
    for (auto& f : futs) {
        Counts c = f.get();
        r.N_t += c.any;
        r.c_i += c.i;
        r.c_ii += c.ii;
        r.c_iii += c.iii;
    }
    r.ratio = (double)r.N_t / (double)t;
    r.frac_i = (double)r.c_i / (double)t;
    r.frac_ii = (double)r.c_ii / (double)t;
    r.frac_iii = (double)r.c_iii / (double)t;
    return r;
}

}  // namespace tq
