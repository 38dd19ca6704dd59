#include <doctest.h>
#include <set>
#include "tq/density.hpp"

using namespace tq;

TEST_SUITE("density") {

TEST_CASE("bit index pins and domain errors") {
    CHECK(psi(Int(-1)) == 1);
    CHECK(psi(Int(2)) == 2);
    CHECK(psi(Int(6)) == 6);
    CHECK(psi(Int(-6)) == 7);
    CHECK(psi(Int(-30)) == 15);
    CHECK(psi(Int(33)) == 36);
    CHECK(psi_inverse(Int(1)) == -1);
    CHECK(psi_inverse(Int(2)) == 2);
    CHECK(psi_inverse(Int(6)) == 6);
    CHECK(psi_inverse(Int(15)) == -30);
    CHECK(psi_inverse(Int(36)) == 33);

    CHECK_THROWS_AS(psi(Int(0)), std::invalid_argument);
    CHECK_THROWS_AS(psi(Int(1)), std::invalid_argument);
    CHECK_THROWS_AS(psi(Int(4)), std::invalid_argument);
    CHECK_THROWS_AS(psi(Int(12)), std::invalid_argument);
    CHECK_THROWS_AS(psi(Int(-18)), std::invalid_argument);
    CHECK_THROWS_AS(psi_inverse(Int(0)), std::invalid_argument);
    CHECK_THROWS_AS(psi_inverse(Int(-3)), std::invalid_argument);
}

TEST_CASE("bijection roundtrip up to 1e5 both ways") {
    long tested = 0, bad = 0;
    for (long x = -100000; x <= 100000; ++x) {
        if (x == 0 || x == 1) continue;
        Int d(x);
        if (squarefree_reduce(d).second != 1) continue;
        ++tested;
        if (psi_inverse(psi(d)) != d) ++bad;
    }
    CHECK(tested > 120000);
    CHECK(bad == 0);

    long bad2 = 0;
    for (long n = 1; n <= 100000; ++n)
        if (psi(psi_inverse(Int(n))) != n) ++bad2;
    CHECK(bad2 == 0);
}

TEST_CASE("independent reconstruction over the first slots") {
    const long p[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    long bad = 0;
    for (long n = 1; n < 2048; ++n) {
        Int d(1);
        for (int j = 0; j < 11; ++j) {
            if (!((n >> j) & 1)) continue;
            if (j == 0)
                d = -d;
            else
                d *= p[j - 1];
        }
        if (psi_inverse(Int(n)) != d || psi(d) != n) ++bad;
    }
    CHECK(bad == 0);

    std::set<long> seen;
    for (long n = 1; n <= 1024; ++n) seen.insert(Int(psi_inverse(Int(n))).get_si());
    CHECK(seen.size() == 1024);  // the ordering never repeats a field
}

TEST_CASE("scan counts at the reference sizes") {
    auto r1 = density_scan(1);
    CHECK(r1.A_t == 1);
    CHECK(r1.N_t == 1);  // the first field is Q(sqrt -1), where 3 is inert
    CHECK(r1.c_i == 1);
    CHECK(r1.c_ii == 0);
    CHECK(r1.c_iii == 0);
    CHECK(r1.ratio == 1.0);

    auto r16 = density_scan(16);
    CHECK(r16.N_t == 12);
    CHECK(r16.c_i == 4);
    CHECK(r16.c_ii == 4);
    CHECK(r16.c_iii == 9);

    auto r = density_scan(1L << 14);
    CHECK(r.A_t == 16384);
    CHECK(r.N_t == 14209);
    CHECK(r.c_i == 4096);
    CHECK(r.c_ii == 3585);
    CHECK(r.c_iii == 12288);
    CHECK(r.ratio == doctest::Approx(14209.0 / 16384.0).epsilon(1e-12));
    CHECK(r.frac_i == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.frac_ii == doctest::Approx(3585.0 / 16384.0).epsilon(1e-12));
    CHECK(r.frac_iii == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.ratio >= 55.0 / 64.0 - 0.02);  // the limiting bound with finite-t slack
}

TEST_CASE("the first two conditions never overlap") {
    long overlap = 0;
    for (long n = 1; n <= 4096; ++n) {
        QuadField K(psi_inverse(Int(n)));
        if (km_satisfies(K, KMCondition::I) && km_satisfies(K, KMCondition::II)) ++overlap;
    }
    CHECK(overlap == 0);

    std::vector<long> first16;
    for (long n = 1; n <= 16; ++n) first16.push_back(Int(psi_inverse(Int(n))).get_si());
    std::vector<long> want{-1, 2, -2, 3, -3, 6, -6, 5, -5, 10, -10, 15, -15, 30, -30, 7};
    CHECK(first16 == want);
}

TEST_CASE("chunked scan is deterministic across worker counts") {
    auto a = density_scan(1000, 1);
    auto b = density_scan(1000, 3);
    auto c = density_scan(1000, 8);
    CHECK(a.N_t == b.N_t);
    CHECK(a.N_t == c.N_t);
    CHECK(a.c_i == b.c_i);
    CHECK(a.c_ii == c.c_ii);
    CHECK(a.c_iii == b.c_iii);
    CHECK(a.ratio == c.ratio);
}

}  // TEST_SUITE
