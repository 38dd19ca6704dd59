#pragma once
#include <optional>
#include <string>
#include <vector>
#include "json.hpp"
#include "tq/modcurves.hpp"

namespace tq {

enum class Verdict { APPEARS_INFINITELY, APPEARS_FINITELY, IMPOSSIBLE, UNKNOWN };
const char* verdict_name(Verdict v);

struct EvidenceStep {
    std::string kind;    // "computation" or "fact"
    std::string detail;  // one-line description of the step
    const FactEntry* fact = nullptr;  // set when kind == "fact"
};

// APPEARS_FINITELY semantics: `count` witnesses exist; when count_is_lower_bound
// the verdict asserts "at least count" and finiteness only where separately
// evidenced (an imported rank-zero fact, or the genus > 1 finiteness note).
struct ClassificationStatus {
    Verdict verdict = Verdict::UNKNOWN;
    std::optional<long> count;
    bool count_is_lower_bound = false;
    std::string reason;  // set for IMPOSSIBLE
    std::vector<EvidenceStep> evidence;

    nlohmann::json to_json(const Int& d, const TorsionGroup& T) const;
    std::string table(const Int& d, const TorsionGroup& T) const;
    bool same_outcome(const ClassificationStatus& o) const;
};

struct ClassifyConfig {
    CertifyConfig certify{};            // genus-1 certify and search budgets
    bool genus2_search = false;         // reporting-only box search on genus-2 models
    CertifyConfig genus2_budget{12, 12, 16, false, 0};
    const Ledger* ledger = nullptr;     // null = Ledger::shared()
};

ClassificationStatus classify(const QuadField& K, const TorsionGroup& T,
                              const ClassifyConfig& cfg = {});

enum class RankStatus { POSITIVE, ZERO, UNKNOWN };
const char* rank_status_name(RankStatus s);

struct RankResult {
    RankStatus st = RankStatus::UNKNOWN;
    const FactEntry* fact = nullptr;          // imported rank fact, when used
    std::optional<SearchHit> witness;         // point of infinite order, when found
};

RankResult rank_status(const ModularCurveRecord& rec, const QuadField& K,
                       const ClassifyConfig& cfg = {});

// squarefree d != 0, 1 with |disc| <= max_abs_disc, ascending |disc|,
// positive d first on ties
std::vector<Int> fields_by_disc(long max_abs_disc);

struct SmallestFieldResult {
    bool exhausted = true;
    Int d;
    ClassificationStatus status;
    std::vector<Int> unknown_ds;  // UNKNOWN fields skipped before the hit
    bool conditional() const { return !unknown_ds.empty(); }
};

// Walk fields by ascending |disc| until classify answers APPEARS_*; UNKNOWN
// fields are skipped but make the eventual answer conditional.
SmallestFieldResult smallest_field(const TorsionGroup& T, long max_abs_disc = 60,
                                   const ClassifyConfig& cfg = {});

struct FixtureCheck {
    std::string id;
    bool on_curve = false, orders_ok = false, group_ok = false;
    std::string detail;
    bool pass() const { return on_curve && orders_ok && group_ok; }
};

struct FixtureReport {
    std::vector<FixtureCheck> checks;
    std::string ambiguity_outcome;  // result of the surd-substitution resolution
    bool all_pass() const;
};

// Verify every witness curve in the fixture file: point-on-curve, pinned point
// orders, and the group generated by the listed points. Empty path = the
// shipped data directory.
FixtureReport verify_fixtures(const std::string& path = "");

}  // namespace tq
