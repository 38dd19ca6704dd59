#include <doctest.h>
#include <algorithm>
#include <set>
#include "tq/modcurves.hpp"

using namespace tq;

namespace {

QuadElem qe(long u, long v, long w, long d) { return QuadElem(Rat(u, w), Rat(v, w), Int(d)); }

bool lifts_rationally(const ModularCurveRecord& rec, const Rat& x0) {
    if (rec.genus == 1) {
        QuadField Q(Int(1));
        ECurve<QuadElem> E = rec.model_over(Q);
        QuadElem x(x0, Rat(0), Int(1));
        QuadElem t = E.a1 * x + E.a3;
        QuadElem D = t * t + QuadElem(Rat(4), Rat(0), Int(1)) * E.rhs(x);
        return rat_sqrt(D.a).has_value();
    }
    QuadElem fx = poly_eval_K(rec.hyper, QuadElem(x0, Rat(0), Int(1)));
    return rat_sqrt(fx.a).has_value();
}

}  // namespace

TEST_SUITE("modcurves") {

TEST_CASE("catalog pins the eight printed models") {
    const auto& cat = catalog();
    REQUIRE(cat.size() == 8);
    std::set<std::pair<int, int>> ids;
    for (const auto& r : cat) ids.insert({r.m, r.n});
    CHECK(ids == std::set<std::pair<int, int>>{
                     {1, 11}, {1, 13}, {1, 14}, {1, 15}, {1, 16}, {1, 18}, {2, 10}, {2, 12}});

    const auto& r11 = record_for(1, 11);
    CHECK(r11.genus == 1);
    CHECK(r11.printed_equation == "y^2-y=x^3-x");
    CHECK(r11.equation_str == "y^2-y=x^3-x^2");
    CHECK(r11.cusp_poly_str == "x(x-1)(x^5-18x^4+35x^3-16x^2-2x+1)");
    CHECK(r11.cusp_factors.size() == 3);

    CHECK(record_for(1, 13).genus == 2);
    CHECK(record_for(1, 13).equation_str == "y^2=x^6-2x^5+x^4-2x^3+6x^2-4x+1");
    CHECK(record_for(1, 13).cusp_poly_str == "x(x-1)(x^3-4x^2+x+1)");
    CHECK(record_for(1, 16).genus == 2);
    CHECK(record_for(1, 18).genus == 2);
    CHECK(record_for(1, 14).genus == 1);
    CHECK(record_for(1, 14).printed_equation.empty());
    CHECK(record_for(2, 12).cusp_poly_str == "x(x-1)(2x-1)(2x^2-x+1)(3x^2-3x-1)(6x^2-6x-1)");

    // the defective quartic stays text-only
    const auto& r15 = record_for(1, 15);
    CHECK(r15.flagged_factor == "x^4-7x^2-6x^2+2x+1");
    CHECK(r15.cusp_factors.size() == 3);
    CHECK(r15.cusp_poly_str.find(r15.flagged_factor) != std::string::npos);

    CHECK(record_for(1, 11).classifies() == TorsionGroup{1, 11});
    CHECK(record_for(2, 10).classifies() == TorsionGroup{2, 10});
    CHECK_THROWS_AS(record_for(1, 17), std::invalid_argument);
    CHECK_THROWS_AS(record_for(1, 13).model_over(QuadField(Int(5))), std::logic_error);

    for (const auto& r : cat) {
        CHECK(r.infinity_cusp);
        if (r.genus == 1) {
            QuadField Q(Int(1));
            CHECK_FALSE(r.model_over(Q).is_singular());
        } else {
            CHECK(poly_disc(r.hyper) != 0);
        }
    }
}

TEST_CASE("cusp predicate on printed roots") {
    CHECK(is_cusp(record_for(1, 11), qe(0, 0, 1, 1)));
    CHECK(is_cusp(record_for(1, 11), qe(1, 0, 1, 1)));
    CHECK_FALSE(is_cusp(record_for(1, 11), qe(5, 0, 1, 1)));
    CHECK_FALSE(is_cusp(record_for(1, 13), qe(2, 0, 1, 1)));  // cubic gives -5
    CHECK(is_cusp(record_for(1, 15), qe(-1, 0, 1, 1)));
    CHECK(is_cusp(record_for(2, 12), qe(1, 0, 2, 1)));  // 2x-1

    // quadratic factors vanish at their quadratic-field roots
    CHECK(is_cusp(record_for(1, 16), qe(1, 1, 1, 2)));         // x^2-2x-1 at 1+sqrt 2
    CHECK(is_cusp(record_for(1, 18), qe(3, 1, 2, 13)));        // x^2-3x-1 at (3+sqrt 13)/2
    CHECK(is_cusp(record_for(2, 10), qe(-1, 1, 2, 5)));        // x^2+x-1 at (-1+sqrt 5)/2
    CHECK_FALSE(is_cusp(record_for(1, 16), qe(1, 1, 1, 3)));   // 1+sqrt 3 is no root
}

TEST_CASE("rational cusp roots lift or are documented") {
    for (const auto& rec : catalog()) {
        for (const auto& f : rec.cusp_factors) {
            if (poly_deg(f) != 1) continue;
            Rat root(-f[0], f[1]);
            root.canonicalize();
            bool documented = false;
            for (const auto& [r, dlift] : rec.nonlifting_roots)
                if (r == root) {
                    documented = true;
                    // fails over Q, lifts over the recorded field
                    CHECK_FALSE(lifts_rationally(rec, root));
                    REQUIRE(rec.genus == 1);
                    QuadField K(dlift);
                    ECurve<QuadElem> E = rec.model_over(K);
                    QuadElem x(root, Rat(0), dlift);
                    QuadElem t = E.a1 * x + E.a3;
                    QuadElem D = t * t + QuadElem(Rat(4), Rat(0), dlift) * E.rhs(x);
                    CHECK(sqrt_in_K(D).has_value());
                }
            if (!documented) CHECK(lifts_rationally(rec, root));
        }
    }
    // the lone documented case
    const auto& r212 = record_for(2, 12);
    REQUIRE(r212.nonlifting_roots.size() == 1);
    CHECK(r212.nonlifting_roots[0].first == Rat(1, 2));
    CHECK(r212.nonlifting_roots[0].second == 6);
}

TEST_CASE("torsion of the genus-1 models over Q is cuspidal") {
    QuadField Q(Int(1));
    for (auto [m, n] : {std::pair{1, 11}, {1, 14}, {1, 15}, {2, 10}, {2, 12}}) {
        const auto& rec = record_for(m, n);
        auto cert = torsion_certify(rec.model_over(Q), {});
        CHECK(cert.exact);
        for (const auto& P : cert.points)
            if (P) CHECK(is_cusp(rec, P->first));
    }
}

TEST_CASE("noncuspidal search") {
    auto h14 = noncuspidal_search(record_for(1, 14), QuadField(Int(-7)));
    REQUIRE_FALSE(h14.empty());
    bool saw2 = false;
    for (const auto& h : h14) {
        CHECK(h.tag == HitTag::TORSION);  // rank 0 field: nothing of infinite order
        if (h.order == 2) saw2 = true;
        CHECK_FALSE(is_cusp(record_for(1, 14), h.x));
    }
    CHECK(saw2);  // the extra 2-torsion x = (3 +- sqrt(-7))/8

    CHECK(noncuspidal_search(record_for(1, 11), QuadField(Int(1))).empty());

    auto h15 = noncuspidal_search(record_for(1, 15), QuadField(Int(5)));
    REQUIRE_FALSE(h15.empty());
    for (const auto& h : h15) CHECK(h.tag == HitTag::TORSION);

    // corroborates the recorded d = 2 ledger gap for Z/2 + Z/10
    CHECK(noncuspidal_search(record_for(2, 10), QuadField(Int(2))).empty());
}

TEST_CASE("genus-2 search reports raw points") {
    CertifyConfig small;
    small.umax = 4; small.vmax = 2; small.wmax = 4;
    auto hits = noncuspidal_search(record_for(1, 13), QuadField(Int(17)), small);
    for (const auto& h : hits) {
        CHECK(h.tag == HitTag::POINT);
        QuadElem fx = poly_eval_K(record_for(1, 13).hyper, h.x);
        CHECK(h.y * h.y == fx);
        CHECK_FALSE(is_cusp(record_for(1, 13), h.x));
    }
    // x = 2 is noncuspidal with f(2) = 17 = (sqrt 17)^2: always present
    bool saw = false;
    for (const auto& h : hits) saw = saw || (h.x == qe(2, 0, 1, 17) && h.y == qe(0, 1, 1, 17));
    CHECK(saw);
}

TEST_CASE("exclusion criterion for Z/18") {
    auto km = [](long d) { return kenku_momose_Z18(QuadField(Int(d))); };
    CHECK(km(2) == KMCondition::I);
    CHECK(km(-19) == KMCondition::I);
    CHECK(km(-31) == KMCondition::I);
    CHECK(km(17) == KMCondition::I);
    CHECK(km(-7) == KMCondition::I);   // satisfies (iii) too; first match wins
    CHECK(km(23) == KMCondition::I);
    CHECK(km(-1) == KMCondition::I);
    CHECK(km(5) == KMCondition::I);
    CHECK(km(29) == KMCondition::I);
    CHECK(km(-11) == KMCondition::II);
    CHECK(km(13) == KMCondition::II);
    CHECK(km(-2) == KMCondition::II);
    CHECK(km(-5) == KMCondition::II);
    CHECK(km(7) == KMCondition::II);
    CHECK(km(21) == KMCondition::III);  // 3 ramifies, so neither (i) nor (ii)
    CHECK(km(-15) == KMCondition::III);
    CHECK(km(3) == KMCondition::NONE);
    CHECK(km(-23) == KMCondition::NONE);
    CHECK(km(6) == KMCondition::NONE);
    CHECK(km(-6) == KMCondition::NONE);
    CHECK(km(33) == KMCondition::NONE);

    CHECK(km_satisfies(QuadField(Int(-7)), KMCondition::III));
    CHECK(std::string(km_name(KMCondition::III)) == "III");
}

TEST_CASE("conditions I and II are disjoint, first match is consistent") {
    for (long d = -1000; d <= 1000; ++d) {
        if (d == 0 || d == 1) continue;
        if (squarefree_reduce(Int(d)).second != 1) continue;
        QuadField K((Int(d)));
        bool i = km_satisfies(K, KMCondition::I), ii = km_satisfies(K, KMCondition::II),
             iii = km_satisfies(K, KMCondition::III);
        CHECK_FALSE((i && ii));
        KMCondition c = kenku_momose_Z18(K);
        if (i) CHECK(c == KMCondition::I);
        else if (ii) CHECK(c == KMCondition::II);
        else if (iii) CHECK(c == KMCondition::III);
        else CHECK(c == KMCondition::NONE);
        CHECK(km_satisfies(K, KMCondition::NONE) == (c == KMCondition::NONE));
    }
}

TEST_CASE("ledger loads with integrity") {
    const Ledger& L = Ledger::shared();
    CHECK(L.all().size() > 100);
    std::set<std::pair<int, int>> curves;
    for (const auto& e : L.all()) {
        CHECK_FALSE(e.citation.empty());
        curves.insert({e.m, e.n});
        if (e.kind == FactKind::RANK_POSITIVE && e.rank) CHECK(*e.rank > 0);
    }
    // every cataloged curve has entries; generic and cyclotomic ids appear
    for (const auto& r : catalog()) CHECK(curves.count({r.m, r.n}));
    CHECK(curves.count({0, 0}));
    CHECK(curves.count({4, 4}));

    // the seven groups excluded over both cyclotomic fields
    for (auto [m, n] :
         {std::pair{1, 13}, {1, 14}, {1, 15}, {1, 16}, {1, 18}, {2, 10}, {2, 12}}) {
        CHECK(L.first(m, n, Int(-1), FactKind::EXCLUDED) != nullptr);
        CHECK(L.first(m, n, Int(-3), FactKind::EXCLUDED) != nullptr);
    }
}

TEST_CASE("fact lookup precedence and recorded readings") {
    const auto* e = fact_lookup(1, 11, Int(-7));
    REQUIRE(e != nullptr);
    CHECK(e->kind == FactKind::RANK_POSITIVE);
    CHECK(e->rank == 1);

    e = fact_lookup(1, 11, Int(-1));
    REQUIRE(e != nullptr);
    CHECK(e->kind == FactKind::RANK_ZERO);

    e = fact_lookup(2, 10, Int(5));
    REQUIRE(e != nullptr);
    CHECK(e->kind == FactKind::RANK_ZERO);

    CHECK(fact_lookup(1, 14, Int(101)) == nullptr);

    const Ledger& L = Ledger::shared();
    // the flagged order-21 sentence: stored group has order 19
    const auto* t13 = L.first(1, 13, Int(1), FactKind::TORSION_GROUP);
    REQUIRE(t13 != nullptr);
    REQUIRE(t13->group.has_value());
    CHECK(*t13->group == std::vector<int>{1, 19});
    CHECK(t13->cuspidal == true);
    CHECK(t13->note.find("inconsistent") != std::string::npos);
    CHECK(t13->citation.find("21") != std::string::npos);

    // the printed "23" is recorded at -23, with the reading explained
    CHECK(L.first(1, 18, Int(23), FactKind::RANK_ZERO) == nullptr);
    const auto* z18 = L.first(1, 18, Int(-23), FactKind::RANK_ZERO);
    REQUIRE(z18 != nullptr);
    CHECK(z18->note.find("-23") != std::string::npos);

    // pinned counts
    const auto* w14 = L.first(1, 14, Int(-7), FactKind::APPEARS_WITNESS);
    REQUIRE(w14 != nullptr);
    CHECK(w14->count == 2);
    CHECK(w14->count_is_exact);
    const auto* w15 = L.first(1, 15, Int(-15), FactKind::APPEARS_WITNESS);
    REQUIRE(w15 != nullptr);
    CHECK(w15->count == 1);

    // facts the smallest-field walks consume all resolve
    for (long d : {-1, -3, 5}) CHECK(Ledger::shared().first(1, 11, Int(d), FactKind::RANK_ZERO));
    for (long d : {5, -7, 2, -2, -11, 3, 13, -15})
        CHECK(L.first(1, 13, Int(d), FactKind::RANK_ZERO));
    for (long d : {5, -7, 2, -2, -11, 3, 13}) CHECK(L.first(1, 16, Int(d), FactKind::RANK_ZERO));
    for (long d : {-2, 3, -23, 6, -6}) CHECK(L.first(1, 18, Int(d), FactKind::TORSION_GROUP));
    for (long d : {-3, -1, 5, -7, 2, -2, -11, 3})
        CHECK(L.first(2, 12, Int(d), FactKind::RANK_ZERO));
    CHECK(L.first(2, 12, Int(13), FactKind::RANK_POSITIVE));
    CHECK(L.first(2, 10, Int(-2), FactKind::RANK_POSITIVE));
    CHECK(L.first(2, 10, Int(2), FactKind::NOTE));  // the recorded gap
}

}  // TEST_SUITE
