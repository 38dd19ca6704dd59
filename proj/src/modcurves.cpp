#include "tq/modcurves.hpp"

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include "json.hpp"

namespace tq {

namespace {

Poly ipoly(std::initializer_list<long> cs) {
    Poly f;
    for (long c : cs) f.push_back(Int(c));
    return f;
}

std::vector<Int> avec(long a1, long a2, long a3, long a4, long a6) {
    return {Int(a1), Int(a2), Int(a3), Int(a4), Int(a6)};
}

}  // namespace

const char* fact_kind_name(FactKind k) {
    switch (k) {
        case FactKind::RANK_ZERO: return "RANK_ZERO";
        case FactKind::RANK_POSITIVE: return "RANK_POSITIVE";
        case FactKind::TORSION_GROUP: return "TORSION_GROUP";
        case FactKind::APPEARS_WITNESS: return "APPEARS_WITNESS";
        case FactKind::EXCLUDED: return "EXCLUDED";
        case FactKind::NOTE: return "NOTE";
    }
    return "?";
}

FactKind fact_kind_parse(const std::string& s) {
    for (FactKind k : {FactKind::RANK_ZERO, FactKind::RANK_POSITIVE, FactKind::TORSION_GROUP,
                       FactKind::APPEARS_WITNESS, FactKind::EXCLUDED, FactKind::NOTE})
        if (s == fact_kind_name(k)) return k;
    throw std::runtime_error("ledger: unknown fact kind \"" + s + "\"");
}

Ledger Ledger::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ledger: cannot open " + path);
    Ledger L;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            FactEntry e;
            e.m = j.at("curve").at(0).get<int>();
            e.n = j.at("curve").at(1).get<int>();
            e.d = Int(j.at("d").get<long>());
            e.kind = fact_kind_parse(j.at("kind").get<std::string>());
            if (j.contains("rank") && !j["rank"].is_null()) e.rank = j["rank"].get<long>();
            if (j.contains("group") && !j["group"].is_null())
                e.group = j["group"].get<std::vector<int>>();
            if (j.contains("cuspidal")) e.cuspidal = j["cuspidal"].get<bool>();
            if (j.contains("count")) e.count = j["count"].get<long>();
            if (j.contains("count_is_exact")) e.count_is_exact = j["count_is_exact"].get<bool>();
            e.citation = j.at("citation").get<std::string>();
            if (j.contains("note")) e.note = j["note"].get<std::string>();
            if (e.citation.empty()) throw std::runtime_error("empty citation");
            L.entries_.push_back(std::move(e));
        } catch (const std::exception& ex) {
            throw std::runtime_error("ledger: " + path + " line " + std::to_string(lineno) +
                                     ": " + ex.what());
        }
    }
    return L;
}

const Ledger& Ledger::shared() {
    static Ledger L = [] {
        const char* env = std::getenv("TQ_LEDGER");
        std::string path = (env && *env) ? env : std::string(TQ_DATA_DIR) + "/ledger.jsonl";
        return load(path);
    }();
    return L;
}

std::vector<const FactEntry*> Ledger::lookup(int m, int n, const Int& d) const {
    std::vector<const FactEntry*> out;
    for (const FactEntry& e : entries_)
        if (e.m == m && e.n == n && e.d == d) out.push_back(&e);
    return out;
}

const FactEntry* Ledger::first(int m, int n, const Int& d, FactKind kind) const {
    for (const FactEntry& e : entries_)
        if (e.m == m && e.n == n && e.d == d && e.kind == kind) return &e;
    return nullptr;
}

const FactEntry* fact_lookup(const Ledger& L, int m, int n, const Int& d) {
    for (FactKind k : {FactKind::RANK_POSITIVE, FactKind::RANK_ZERO, FactKind::TORSION_GROUP,
                       FactKind::APPEARS_WITNESS, FactKind::EXCLUDED, FactKind::NOTE})
        if (const FactEntry* e = L.first(m, n, d, k)) return e;
    return nullptr;
}

const FactEntry* fact_lookup(int m, int n, const Int& d) {
    return fact_lookup(Ledger::shared(), m, n, d);
}

const std::vector<ModularCurveRecord>& catalog() {
    static const std::vector<ModularCurveRecord> recs = [] {
        std::vector<ModularCurveRecord> v;

        ModularCurveRecord r;

        // The printed model's cusp polynomial has roots x = 0, 1 but those are
        // not torsion x-coordinates of y^2 - y = x^3 - x; on the working model
        // below they are, and the torsion is Z/5 over every quadratic field as
        // the surrounding statements require. The printed form is preserved.
        r = {};
        r.m = 1; r.n = 11; r.genus = 1;
        r.a = avec(0, -1, -1, 0, 0);
        r.equation_str = "y^2-y=x^3-x^2";
        r.printed_equation = "y^2-y=x^3-x";
        r.cusp_factors = {ipoly({0, 1}), ipoly({-1, 1}), ipoly({1, -2, -16, 35, -18, 1})};
        r.cusp_poly_str = "x(x-1)(x^5-18x^4+35x^3-16x^2-2x+1)";
        v.push_back(r);

        r = {};
        r.m = 1; r.n = 13; r.genus = 2;
        r.hyper = ipoly({1, -4, 6, -2, 1, -2, 1});
        r.equation_str = "y^2=x^6-2x^5+x^4-2x^3+6x^2-4x+1";
        r.cusp_factors = {ipoly({0, 1}), ipoly({-1, 1}), ipoly({1, 1, -4, 1})};
        r.cusp_poly_str = "x(x-1)(x^3-4x^2+x+1)";
        v.push_back(r);

        r = {};
        r.m = 1; r.n = 14; r.genus = 1;
        r.a = avec(1, 0, 1, -1, 0);
        r.equation_str = "y^2+xy+y=x^3-x";
        r.cusp_factors = {ipoly({0, 1}), ipoly({-1, 1}), ipoly({1, 1}),
                          ipoly({1, -1, -9, 1}), ipoly({1, -1, -2, 1})};
        r.cusp_poly_str = "x(x-1)(x+1)(x^3-9x^2-x+1)(x^3-2x^2-x+1)";
        v.push_back(r);

        // The second printed quartic has two degree-2 terms; it is kept as
        // text only and never evaluated.
        r = {};
        r.m = 1; r.n = 15; r.genus = 1;
        r.a = avec(1, 1, 1, 0, 0);
        r.equation_str = "y^2+xy+y=x^3+x^2";
        r.cusp_factors = {ipoly({0, 1}), ipoly({1, 1}), ipoly({1, 2, 4, 3, 1})};
        r.cusp_poly_str = "x(x+1)(x^4+3x^3+4x^2+2x+1)(x^4-7x^2-6x^2+2x+1)";
        r.flagged_factor = "x^4-7x^2-6x^2+2x+1";
        v.push_back(r);

        r = {};
        r.m = 1; r.n = 16; r.genus = 2;
        r.hyper = ipoly({0, -1, 2, 0, 2, 1});
        r.equation_str = "y^2=x(x^2+1)(x^2+2x-1)";
        r.cusp_factors = {ipoly({0, 1}), ipoly({-1, 1}), ipoly({1, 1}),
                          ipoly({-1, -2, 1}), ipoly({-1, 2, 1})};
        r.cusp_poly_str = "x(x-1)(x+1)(x^2-2x-1)(x^2+2x-1)";
        v.push_back(r);

        r = {};
        r.m = 1; r.n = 18; r.genus = 2;
        r.hyper = ipoly({1, 4, 10, 10, 5, 2, 1});
        r.equation_str = "y^2=x^6+2x^5+5x^4+10x^3+10x^2+4x+1";
        r.cusp_factors = {ipoly({0, 1}), ipoly({1, 1}), ipoly({1, 1, 1}), ipoly({-1, -3, 1})};
        r.cusp_poly_str = "x(x+1)(x^2+x+1)(x^2-3x-1)";
        v.push_back(r);

        r = {};
        r.m = 2; r.n = 10; r.genus = 1;
        r.a = avec(0, 1, 0, -1, 0);
        r.equation_str = "y^2=x^3+x^2-x";
        r.cusp_factors = {ipoly({0, 1}), ipoly({-1, 1}), ipoly({1, 1}),
                          ipoly({-1, 1, 1}), ipoly({-1, -4, 1})};
        r.cusp_poly_str = "x(x-1)(x+1)(x^2+x-1)(x^2-4x-1)";
        v.push_back(r);

        // x = 1/2 gives y^2 = 3/8: no rational lift, the cusp becomes a point
        // of the model only over Q(sqrt 6).
        r = {};
        r.m = 2; r.n = 12; r.genus = 1;
        r.a = avec(0, -1, 0, 1, 0);
        r.equation_str = "y^2=x^3-x^2+x";
        r.cusp_factors = {ipoly({0, 1}), ipoly({-1, 1}), ipoly({-1, 2}),
                          ipoly({1, -1, 2}), ipoly({-1, -3, 3}), ipoly({-1, -6, 6})};
        r.cusp_poly_str = "x(x-1)(2x-1)(2x^2-x+1)(3x^2-3x-1)(6x^2-6x-1)";
        r.nonlifting_roots = {{Rat(1, 2), Int(6)}};
        v.push_back(r);

        return v;
    }();
    return recs;
}

const ModularCurveRecord& record_for(int m, int n) {
    for (const ModularCurveRecord& r : catalog())
        if (r.m == m && r.n == n) return r;
    throw std::invalid_argument("record_for: no cataloged curve (" + std::to_string(m) + "," +
                                std::to_string(n) + ")");
}

ECurve<QuadElem> ModularCurveRecord::model_over(const QuadField& K) const {
    if (genus != 1) throw std::logic_error("model_over: genus-2 record has no Weierstrass model");
    auto c = [&](size_t i) { return QuadElem(Rat(a[i]), Rat(0), K.d); };
    return ECurve<QuadElem>(c(0), c(1), c(2), c(3), c(4));
}

QuadElem poly_eval_K(const Poly& f, const QuadElem& x) {
    QuadElem acc(Rat(0), Rat(0), x.d);
    for (int i = (int)f.size() - 1; i >= 0; --i)
        acc = acc * x + QuadElem(Rat(f[i]), Rat(0), x.d);
    return acc;
}

bool is_cusp(const ModularCurveRecord& rec, const QuadElem& x) {
    for (const Poly& f : rec.cusp_factors)
        if (poly_eval_K(f, x).is_zero()) return true;
    return false;
}

std::vector<SearchHit> noncuspidal_search(const ModularCurveRecord& rec, const QuadField& K,
                                          const CertifyConfig& budget) {
    std::vector<SearchHit> hits;
    if (rec.genus == 1) {
        ECurve<QuadElem> E = rec.model_over(K);
        for (const EPoint<QuadElem>& P : box_scan_points(E, budget)) {
            if (!P || is_cusp(rec, P->first)) continue;
            int o = point_order(E, P, 24);
            if (o == kOverCap)
                hits.push_back({P->first, P->second, HitTag::NONTORSION, 0});
            else
                hits.push_back({P->first, P->second, HitTag::TORSION, o});
        }
        return hits;
    }
    long dl = K.d.get_si();
    for (long w = 1; w <= budget.wmax; ++w)
        for (long u = -budget.umax; u <= budget.umax; ++u) {
            long vhi = (dl == 1) ? 0 : budget.vmax;
            for (long v = (dl == 1) ? 0 : -budget.vmax; v <= vhi; ++v) {
                if (std::gcd(std::gcd(std::abs(u), std::abs(v)), w) != 1) continue;
                QuadElem x(Rat(u, w), Rat(v, w), K.d);
                if (is_cusp(rec, x)) continue;
                auto r = sqrt_in_K(poly_eval_K(rec.hyper, x));
                if (!r) continue;
                hits.push_back({x, *r, HitTag::POINT, 0});
                if (!r->is_zero())
                    hits.push_back({x, -*r, HitTag::POINT, 0});
            }
        }
    return hits;
}

const char* km_name(KMCondition c) {
    switch (c) {
        case KMCondition::NONE: return "NONE";
        case KMCondition::I: return "I";
        case KMCondition::II: return "II";
        case KMCondition::III: return "III";
    }
    return "?";
}

bool km_satisfies(const QuadField& K, KMCondition which) {
    switch (which) {
        case KMCondition::I:
            return splitting_type(K, 3) == SplitType::INERT;
        case KMCondition::II:
            return splitting_type(K, 3) == SplitType::SPLIT &&
                   splitting_type(K, 2) != SplitType::SPLIT;
        case KMCondition::III:
            return splitting_type(K, 5) == SplitType::RAMIFIED ||
                   splitting_type(K, 7) == SplitType::RAMIFIED;
        case KMCondition::NONE:
            return !km_satisfies(K, KMCondition::I) && !km_satisfies(K, KMCondition::II) &&
                   !km_satisfies(K, KMCondition::III);
    }
    return false;
}

KMCondition kenku_momose_Z18(const QuadField& K) {
    for (KMCondition c : {KMCondition::I, KMCondition::II, KMCondition::III})
        if (km_satisfies(K, c)) return c;
    return KMCondition::NONE;
}

}  // namespace tq
