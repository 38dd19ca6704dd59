#include "tq/classify.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tq {

namespace {

const Ledger& ledger_of(const ClassifyConfig& cfg) {
    return cfg.ledger ? *cfg.ledger : Ledger::shared();
}

bool mazur_group(const TorsionGroup& T) {
    if (T.m == 1) return (T.n >= 1 && T.n <= 10) || T.n == 12;
    if (T.m == 2) return T.n == 2 || T.n == 4 || T.n == 6 || T.n == 8;
    return false;
}

bool cyclotomic_group(const TorsionGroup& T) {
    return (T.m == 3 && (T.n == 3 || T.n == 6)) || (T.m == 4 && T.n == 4);
}

const ModularCurveRecord* cataloged(const TorsionGroup& T) {
    for (const auto& r : catalog())
        if (r.m == T.m && r.n == T.n) return &r;
    return nullptr;
}

// the three genus-1 groups with all-or-infinitely-many dichotomy
bool trichotomy_group(const TorsionGroup& T) {
    return (T.m == 1 && T.n == 11) || (T.m == 2 && (T.n == 10 || T.n == 12));
}

long group_order_of(const std::vector<int>& inv) {
    long o = 1;
    for (int f : inv) o *= f;
    return o;
}

void add_fact(ClassificationStatus& st, const FactEntry* e, const std::string& what) {
    st.evidence.push_back({"fact", what + " [" + fact_kind_name(e->kind) + "]", e});
}

void add_comp(ClassificationStatus& st, const std::string& what) {
    st.evidence.push_back({"computation", what, nullptr});
}

// exact-d entry first, then the d = 0 blanket
const FactEntry* torsion_fact_for(const Ledger& L, int m, int n, const Int& d) {
    if (const FactEntry* e = L.first(m, n, d, FactKind::TORSION_GROUP)) return e;
    return L.first(m, n, Int(0), FactKind::TORSION_GROUP);
}

void append_notes(ClassificationStatus& st, const Ledger& L, int m, int n, const Int& d) {
    for (const FactEntry* e : L.lookup(m, n, d))
        if (e->kind == FactKind::NOTE) add_fact(st, e, "note");
}

const FactEntry* generic_note_containing(const Ledger& L, const std::string& needle) {
    for (const FactEntry* e : L.lookup(0, 0, Int(0)))
        if (e->kind == FactKind::NOTE && e->citation.find(needle) != std::string::npos) return e;
    return nullptr;
}

void conclude_finitely(ClassificationStatus& st, const FactEntry* wit) {
    st.verdict = Verdict::APPEARS_FINITELY;
    if (wit && wit->count) {
        st.count = wit->count;
        st.count_is_lower_bound = !wit->count_is_exact;
    } else {
        st.count = 1;
        st.count_is_lower_bound = true;
    }
}

ClassificationStatus classify_genus1(const QuadField& K, const ModularCurveRecord& rec,
                                     const Ledger& L, const ClassifyConfig& cfg,
                                     ClassificationStatus st) {
    const Int& d = K.d;
    ECurve<QuadElem> E = rec.model_over(K);
    TorsionCertificate cert = torsion_certify(E, {}, cfg.certify);
    {
        std::ostringstream os;
        os << "torsion_certify: " << cert.lower.str()
           << (cert.exact ? " (exact)" : " (lower bound, upper " +
                                             std::to_string(cert.refined_upper) + ")");
        add_comp(st, os.str());
    }

    std::vector<EPoint<QuadElem>> unmatched;
    for (const auto& P : cert.points)
        if (P && !is_cusp(rec, P->first)) unmatched.push_back(P);
    add_comp(st, std::to_string(unmatched.size()) +
                     " certified torsion point(s) outside the printed cusp factors");

    const FactEntry* tf = torsion_fact_for(L, rec.m, rec.n, d);
    bool cusps_by_fact = false;
    if (tf) {
        bool order_compatible = !tf->group || group_order_of(*tf->group) == cert.lower.order();
        if (!unmatched.empty() && tf->cuspidal && *tf->cuspidal && order_compatible) {
            cusps_by_fact = true;
            add_fact(st, tf, "imported: all torsion over this field is cuspidal");
            add_comp(st, "unmatched torsion points treated as cusps per the imported statement "
                         "(the printed cusp polynomial does not capture them)");
        } else {
            add_fact(st, tf, "torsion statement");
            if (tf->group && cert.exact && !order_compatible)
                add_comp(st, "warning: certified torsion order " +
                                 std::to_string(cert.lower.order()) +
                                 " differs from the imported group");
        }
    }
    bool noncusp_torsion = !unmatched.empty() && !cusps_by_fact;

    std::vector<SearchHit> hits = noncuspidal_search(rec, K, cfg.certify);
    long nontors = 0;
    for (const auto& h : hits)
        if (h.tag == HitTag::NONTORSION) ++nontors;
    add_comp(st, "noncuspidal_search: " + std::to_string(hits.size()) + " hit(s), " +
                     std::to_string(nontors) + " of infinite order");

    const FactEntry* rp = L.first(rec.m, rec.n, d, FactKind::RANK_POSITIVE);
    const FactEntry* rz = rp ? nullptr : L.first(rec.m, rec.n, d, FactKind::RANK_ZERO);
    const FactEntry* wit = L.first(rec.m, rec.n, d, FactKind::APPEARS_WITNESS);

    if (rp || nontors > 0) {
        // positive rank: infinitely many curves with this torsion
        if (rp) add_fact(st, rp, "imported rank");
        if (nontors > 0) add_comp(st, "point of infinite order found: rank is positive");
        if (const FactEntry* mn = generic_note_containing(L, "If the rank is positive"))
            add_fact(st, mn, "method");
        st.verdict = Verdict::APPEARS_INFINITELY;
        append_notes(st, L, rec.m, rec.n, d);
        return st;
    }

    if (rz) {
        add_fact(st, rz, "imported rank");
        if (noncusp_torsion) {
            if (trichotomy_group(rec.classifies())) {
                // would contradict the imported dichotomy for this curve
                st.verdict = Verdict::UNKNOWN;
                add_comp(st, "conflict: rank zero with noncuspidal torsion is excluded for this "
                             "curve by the imported statements; leaving the field unresolved");
                append_notes(st, L, rec.m, rec.n, d);
                return st;
            }
            conclude_finitely(st, wit);
            if (wit) add_fact(st, wit, "witness count");
            add_comp(st, "rank zero: only the noncuspidal torsion points yield curves");
            append_notes(st, L, rec.m, rec.n, d);
            return st;
        }
        bool complete = cert.exact || (tf && tf->cuspidal && *tf->cuspidal);
        if (complete) {
            st.verdict = Verdict::IMPOSSIBLE;
            st.reason = "rank zero and all torsion cuspidal";
            append_notes(st, L, rec.m, rec.n, d);
            return st;
        }
        st.verdict = Verdict::UNKNOWN;
        add_comp(st, "rank zero but the torsion certificate is not exact and no imported "
                     "statement covers the remainder");
        append_notes(st, L, rec.m, rec.n, d);
        return st;
    }

    // no rank information
    if (noncusp_torsion && !trichotomy_group(rec.classifies())) {
        conclude_finitely(st, wit);
        if (wit) add_fact(st, wit, "witness count");
        add_comp(st, "rank unknown: the count is a lower bound and finiteness is not asserted");
        append_notes(st, L, rec.m, rec.n, d);
        return st;
    }
    st.verdict = Verdict::UNKNOWN;
    add_comp(st, noncusp_torsion
                     ? "noncuspidal torsion found but no rank fact; the imported dichotomy "
                       "for this curve forbids a finite positive count"
                     : "no rank fact and no noncuspidal witness");
    append_notes(st, L, rec.m, rec.n, d);
    return st;
}

ClassificationStatus classify_genus2(const QuadField& K, const ModularCurveRecord& rec,
                                     const Ledger& L, const ClassifyConfig& cfg,
                                     ClassificationStatus st) {
    const Int& d = K.d;
    if (rec.m == 1 && rec.n == 18) {
        KMCondition c = kenku_momose_Z18(K);
        add_comp(st, std::string("exclusion criterion: ") + km_name(c));
        if (c != KMCondition::NONE) {
            st.verdict = Verdict::IMPOSSIBLE;
            st.reason = std::string("Kenku-Momose ") + km_name(c);
            append_notes(st, L, rec.m, rec.n, d);
            return st;
        }
    }

    const FactEntry* rz = L.first(rec.m, rec.n, d, FactKind::RANK_ZERO);
    const FactEntry* tf = torsion_fact_for(L, rec.m, rec.n, d);
    const FactEntry* wit = L.first(rec.m, rec.n, d, FactKind::APPEARS_WITNESS);

    long B = jacobian_torsion_gcd_bound(rec.hyper, K);
    add_comp(st, "Jacobian torsion gcd bound: " + std::to_string(B));
    if (tf && tf->group) {
        long fo = group_order_of(*tf->group);
        add_comp(st, B % fo == 0
                         ? "imported torsion order " + std::to_string(fo) + " divides the bound"
                         : "warning: imported torsion order " + std::to_string(fo) +
                               " does not divide the bound");
    }

    if (cfg.genus2_search) {
        auto hits = noncuspidal_search(rec, K, cfg.genus2_budget);
        add_comp(st, "noncuspidal box points (reporting only): " +
                         std::to_string(hits.size()));
    }

    if (wit) {
        conclude_finitely(st, wit);
        add_fact(st, wit, "witness");
        if (const FactEntry* fn = generic_note_containing(L, "Faltings"))
            add_fact(st, fn, "finiteness");
        append_notes(st, L, rec.m, rec.n, d);
        return st;
    }
    if (rz && tf && tf->cuspidal && *tf->cuspidal) {
        st.verdict = Verdict::IMPOSSIBLE;
        st.reason = "rank zero and all torsion cuspidal";
        add_fact(st, rz, "imported rank");
        add_fact(st, tf, "imported torsion");
        append_notes(st, L, rec.m, rec.n, d);
        return st;
    }
    if (rz) add_fact(st, rz, "imported rank");
    if (tf) add_fact(st, tf, "imported torsion");
    st.verdict = Verdict::UNKNOWN;
    add_comp(st, "no imported conclusion for this field");
    append_notes(st, L, rec.m, rec.n, d);
    return st;
}

Rat rat_of(const std::string& s) {
    Rat r(s);
    r.canonicalize();
    return r;
}

QuadElem qe_of(const nlohmann::json& pair, const Int& d) {
    return QuadElem(rat_of(pair.at(0).get<std::string>()),
                    rat_of(pair.at(1).get<std::string>()), d);
}

ECurve<QuadElem> curve_of(const nlohmann::json& cur, const Int& d) {
    return ECurve<QuadElem>(qe_of(cur.at("a1"), d), qe_of(cur.at("a2"), d),
                            qe_of(cur.at("a3"), d), qe_of(cur.at("a4"), d),
                            qe_of(cur.at("a6"), d));
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::APPEARS_INFINITELY: return "APPEARS_INFINITELY";
        case Verdict::APPEARS_FINITELY: return "APPEARS_FINITELY";
        case Verdict::IMPOSSIBLE: return "IMPOSSIBLE";
        case Verdict::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

const char* rank_status_name(RankStatus s) {
    switch (s) {
        case RankStatus::POSITIVE: return "POSITIVE";
        case RankStatus::ZERO: return "ZERO";
        case RankStatus::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

nlohmann::json ClassificationStatus::to_json(const Int& d, const TorsionGroup& T) const {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& s : evidence) {
        nlohmann::json e{{"kind", s.kind}, {"detail", s.detail}};
        if (s.fact) {
            e["fact"] = {{"curve", {s.fact->m, s.fact->n}},
                         {"d", s.fact->d.get_si()},
                         {"kind", fact_kind_name(s.fact->kind)},
                         {"citation", s.fact->citation}};
            if (!s.fact->note.empty()) e["fact"]["note"] = s.fact->note;
        }
        ev.push_back(e);
    }
    nlohmann::json j{{"field", d.get_si()},
                     {"group", {T.m, T.n}},
                     {"verdict", verdict_name(verdict)},
                     {"evidence", ev}};
    if (count) {
        j["count"] = *count;
        j["count_is_lower_bound"] = count_is_lower_bound;
    }
    if (!reason.empty()) j["reason"] = reason;
    return j;
}

std::string ClassificationStatus::table(const Int& d, const TorsionGroup& T) const {
    std::ostringstream os;
    os << "field d = " << d.get_str() << "   group " << T.str() << "\n";
    os << "verdict: " << verdict_name(verdict);
    if (count) {
        os << " (count " << (count_is_lower_bound ? ">= " : "") << *count << ")";
    }
    if (!reason.empty()) os << " [" << reason << "]";
    os << "\n";
    for (const auto& s : evidence) {
        os << "  - [" << s.kind << "] " << s.detail << "\n";
        if (s.fact) {
            os << "      citation: " << s.fact->citation << "\n";
            if (!s.fact->note.empty()) os << "      note: " << s.fact->note << "\n";
        }
    }
    return os.str();
}

bool ClassificationStatus::same_outcome(const ClassificationStatus& o) const {
    if (verdict != o.verdict || count != o.count ||
        count_is_lower_bound != o.count_is_lower_bound || reason != o.reason)
        return false;
    if (evidence.size() != o.evidence.size()) return false;
    for (size_t i = 0; i < evidence.size(); ++i) {
        const EvidenceStep &a = evidence[i], &b = o.evidence[i];
        if (a.kind != b.kind || a.detail != b.detail) return false;
        if ((a.fact == nullptr) != (b.fact == nullptr)) return false;
        if (a.fact && (a.fact->kind != b.fact->kind || a.fact->citation != b.fact->citation))
            return false;
    }
    return true;
}

ClassificationStatus classify(const QuadField& K, const TorsionGroup& T,
                              const ClassifyConfig& cfg) {
    if (!in_theorem1_list(T))
        throw std::invalid_argument("classify: " + T.str() +
                                    " is not a quadratic-field torsion group");
    const Ledger& L = ledger_of(cfg);
    ClassificationStatus st;
    const Int& d = K.d;

    if (mazur_group(T)) {
        st.verdict = Verdict::APPEARS_INFINITELY;
        add_comp(st, "group " + T.str() + " is in the rational list");
        if (const FactEntry* e = L.first(0, 0, Int(0), FactKind::APPEARS_WITNESS))
            add_fact(st, e, "rational-list groups occur over every field");
        return st;
    }

    if (d == 1) {
        st.verdict = Verdict::IMPOSSIBLE;
        st.reason = "not a torsion group over the rationals";
        if (const FactEntry* e = L.first(0, 0, Int(1), FactKind::NOTE))
            add_fact(st, e, "rational torsion list");
        return st;
    }

    if (cyclotomic_group(T)) {
        if (const FactEntry* e = L.first(T.m, T.n, d, FactKind::APPEARS_WITNESS)) {
            st.verdict = Verdict::APPEARS_FINITELY;
            st.count = 1;
            st.count_is_lower_bound = true;
            add_fact(st, e, "appears over this cyclotomic field");
            add_comp(st, "multiplicity not recorded; the count is a lower bound");
            return st;
        }
        if (const FactEntry* e = L.first(T.m, T.n, Int(0), FactKind::EXCLUDED)) {
            st.verdict = Verdict::IMPOSSIBLE;
            st.reason = "occurs only over its cyclotomic field";
            add_fact(st, e, "cyclotomic exclusion");
            return st;
        }
        st.verdict = Verdict::UNKNOWN;
        add_comp(st, "no ledger entry for this cyclotomic group");
        return st;
    }

    const ModularCurveRecord* rec = cataloged(T);
    if (!rec) {
        st.verdict = Verdict::UNKNOWN;
        add_comp(st, "no cataloged modular curve for " + T.str());
        return st;
    }

    if (const FactEntry* e = L.first(rec->m, rec->n, d, FactKind::EXCLUDED)) {
        st.verdict = Verdict::IMPOSSIBLE;
        st.reason = "excluded over this field";
        add_fact(st, e, "imported exclusion");
        append_notes(st, L, rec->m, rec->n, d);
        return st;
    }

    if (rec->genus == 2) return classify_genus2(K, *rec, L, cfg, std::move(st));
    return classify_genus1(K, *rec, L, cfg, std::move(st));
}

RankResult rank_status(const ModularCurveRecord& rec, const QuadField& K,
                       const ClassifyConfig& cfg) {
    if (rec.genus != 1) throw std::invalid_argument("rank_status: genus-1 records only");
    const Ledger& L = ledger_of(cfg);
    RankResult r;
    if (const FactEntry* e = L.first(rec.m, rec.n, K.d, FactKind::RANK_POSITIVE)) {
        r.st = RankStatus::POSITIVE;
        r.fact = e;
        return r;
    }
    if (const FactEntry* e = L.first(rec.m, rec.n, K.d, FactKind::RANK_ZERO)) {
        r.st = RankStatus::ZERO;
        r.fact = e;
        return r;
    }
    for (const SearchHit& h : noncuspidal_search(rec, K, cfg.certify))
        if (h.tag == HitTag::NONTORSION) {
            r.st = RankStatus::POSITIVE;
            r.witness = h;
            return r;
        }
    return r;
}

std::vector<Int> fields_by_disc(long max_abs_disc) {
    std::vector<Int> ds;
    for (long x = -max_abs_disc; x <= max_abs_disc; ++x) {
        if (x == 0 || x == 1) continue;
        Int d(x);
        if (squarefree_reduce(d).second != 1) continue;
        if (Int(abs(field_discriminant(d))) > max_abs_disc) continue;
        ds.push_back(d);
    }
    std::sort(ds.begin(), ds.end(), [](const Int& a, const Int& b) {
        Int da(abs(field_discriminant(a))), db(abs(field_discriminant(b)));
        if (da != db) return da < db;
        return a > b;  // positive d first on a tie
    });
    return ds;
}

SmallestFieldResult smallest_field(const TorsionGroup& T, long max_abs_disc,
                                   const ClassifyConfig& cfg) {
    if (!cataloged(T))
        throw std::invalid_argument("smallest_field: cataloged groups only");
    SmallestFieldResult R;
    for (const Int& d : fields_by_disc(max_abs_disc)) {
        QuadField K(d);
        ClassificationStatus st = classify(K, T, cfg);
        if (st.verdict == Verdict::APPEARS_INFINITELY ||
            st.verdict == Verdict::APPEARS_FINITELY) {
            R.exhausted = false;
            R.d = d;
            R.status = std::move(st);
            return R;
        }
        if (st.verdict == Verdict::UNKNOWN) R.unknown_ds.push_back(d);
    }
    return R;
}

bool FixtureReport::all_pass() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(),
                       [](const FixtureCheck& c) { return c.pass(); });
}

FixtureReport verify_fixtures(const std::string& path) {
    std::string p = path.empty() ? std::string(TQ_DATA_DIR) + "/fixtures.json" : path;
    std::ifstream in(p);
    if (!in) throw std::runtime_error("fixtures: cannot open " + p);
    nlohmann::json top;
    in >> top;
    FixtureReport rep;
    for (const auto& f : top.at("fixtures")) {
        FixtureCheck c;
        c.id = f.value("id", "?");
        try {
            Int d(f.at("d").get<long>());
            ECurve<QuadElem> E = curve_of(f.at("curve"), d);
            if (E.is_singular()) {
                c.detail = "singular model";
                rep.checks.push_back(c);
                continue;
            }
            bool oc = true, ords = true;
            std::vector<EPoint<QuadElem>> gens;
            for (const auto& pt : f.at("points")) {
                EPoint<QuadElem> P = std::make_pair(qe_of(pt.at("x"), d), qe_of(pt.at("y"), d));
                if (!on_curve(E, P)) {
                    oc = false;
                    c.detail += "point off the curve; ";
                    continue;
                }
                gens.push_back(P);
                if (pt.contains("order") && !pt.at("order").is_null()) {
                    int want = pt.at("order").get<int>();
                    int got = point_order(E, P, std::max(24, want + 1));
                    if (got != want) {
                        ords = false;
                        c.detail += "order " + std::to_string(got) + " != " +
                                    std::to_string(want) + "; ";
                    }
                }
            }
            c.on_curve = oc;
            c.orders_ok = ords;
            auto wg = f.at("group");
            TorsionGroup want{wg.at(0).get<int>(), wg.at(1).get<int>()};
            if (oc && !gens.empty()) {
                auto closure = subgroup_closure(E, gens);
                TorsionGroup got = group_structure(E, closure);
                c.group_ok = got == want;
                if (!c.group_ok) c.detail += "group " + got.str() + " != " + want.str() + "; ";
            }
            if (c.id == "z13_17") {
                // the printed point's surd: re-read every printed digit over the
                // other candidate field and test the curve equation there
                Int d7(-7);
                ECurve<QuadElem> E7 = curve_of(f.at("curve"), d7);
                const auto& pt = f.at("points").at(0);
                EPoint<QuadElem> P7 =
                    std::make_pair(qe_of(pt.at("x"), d7), qe_of(pt.at("y"), d7));
                bool ok7 = on_curve(E7, P7);
                rep.ambiguity_outcome =
                    ok7 ? "unresolved: the point satisfies the curve under both surd readings"
                        : "resolved by substitution: the point lies on the curve with the surd "
                          "read as sqrt(17) (order 13); re-reading every surd as sqrt(-7) "
                          "fails the curve equation";
                c.detail += rep.ambiguity_outcome;
            }
        } catch (const std::exception& ex) {
            c.detail += std::string("error: ") + ex.what();
        }
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace tq
