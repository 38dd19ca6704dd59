#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "tq/ellcurve.hpp"
#include "tq/genus2.hpp"

namespace tq {

// Imported facts (ranks, torsion statements, witnesses) consumed by the
// classifier but never computed here. EXCLUDED = the group does not occur over
// the field; NOTE = free-form statement attached to a (curve, d) pair.
enum class FactKind { RANK_ZERO, RANK_POSITIVE, TORSION_GROUP, APPEARS_WITNESS, EXCLUDED, NOTE };

const char* fact_kind_name(FactKind k);
FactKind fact_kind_parse(const std::string& s);

// One ledger line. Conventions: curve (0,0) = generic statement not tied to a
// model; d = 0 = blanket over all quadratic fields; d = 1 = the rationals.
struct FactEntry {
    int m = 0, n = 0;
    Int d;
    FactKind kind = FactKind::NOTE;
    std::optional<long> rank;               // RANK_POSITIVE may omit the value
    std::optional<std::vector<int>> group;  // invariant factors, ascending
    std::optional<bool> cuspidal;           // all torsion cuspidal?
    std::optional<long> count;              // pinned witness count
    bool count_is_exact = false;
    std::string citation;  // verbatim source sentence, never empty
    std::string note;
};

class Ledger {
public:
    static Ledger load(const std::string& path);
    static const Ledger& shared();  // $TQ_LEDGER if set, else TQ_DATA_DIR/ledger.jsonl

    const std::vector<FactEntry>& all() const { return entries_; }
    // entries for curve (m, n) at exactly this d, in file order
    std::vector<const FactEntry*> lookup(int m, int n, const Int& d) const;
    const FactEntry* first(int m, int n, const Int& d, FactKind kind) const;

private:
    std::vector<FactEntry> entries_;
};

// Single most relevant exact-d entry: rank facts, then torsion, witness,
// exclusion, note. Null when the ledger is silent at (m, n, d).
const FactEntry* fact_lookup(const Ledger& L, int m, int n, const Int& d);
const FactEntry* fact_lookup(int m, int n, const Int& d);  // shared ledger

// Catalog entry for X_1(m, n). Genus 1 stores long-Weierstrass a-invariants
// a1, a2, a3, a4, a6; genus 2 stores y^2 = hyper(x). cusp_factors are the
// factors of the printed cusp polynomial that admit faithful evaluation;
// flagged_factor preserves a printed factor whose monomials are defective
// (kept as text, never evaluated). printed_equation is set when the printed
// model differs from the working model (kept as text; the working model is the
// one whose cusp and torsion structure matches the surrounding statements).
struct ModularCurveRecord {
    int m = 1, n = 0;
    int genus = 1;
    std::vector<Int> a;  // genus 1: {a1, a2, a3, a4, a6}
    Poly hyper;          // genus 2: ascending coefficients
    std::string equation_str;
    std::string printed_equation;
    std::vector<Poly> cusp_factors;
    std::string cusp_poly_str;
    std::string flagged_factor;
    bool infinity_cusp = true;  // the point at infinity of the model is a cusp
    // rational roots of cusp factors with no rational lift on the model; each
    // pair is (root, smallest d over which the lift exists)
    std::vector<std::pair<Rat, Int>> nonlifting_roots;

    TorsionGroup classifies() const { return TorsionGroup{m, n}; }
    ECurve<QuadElem> model_over(const QuadField& K) const;  // genus 1 only
};

const std::vector<ModularCurveRecord>& catalog();
const ModularCurveRecord& record_for(int m, int n);  // throws for unknown ids

QuadElem poly_eval_K(const Poly& f, const QuadElem& x);

// true iff some stored cusp factor vanishes at x (one-directional: a root is a
// cusp; nothing is inferred about non-roots beyond "not certified cuspidal")
bool is_cusp(const ModularCurveRecord& rec, const QuadElem& x);

enum class HitTag { TORSION, NONTORSION, POINT };  // POINT = genus-2 raw hit

struct SearchHit {
    QuadElem x, y;
    HitTag tag;
    int order = 0;  // set when tag == TORSION
};

// Box search for points with is_cusp(x) false. Genus 1: every hit is tagged
// TORSION(order) or NONTORSION via point_order (cap 24). Genus 2: raw
// solutions of y^2 = f(x) over K in the same box, reporting only.
std::vector<SearchHit> noncuspidal_search(const ModularCurveRecord& rec, const QuadField& K,
                                          const CertifyConfig& budget = {});

// Exclusion criterion for Z/18: (I) 3 inert, (II) 3 splits and 2 does not
// split, (III) 5 or 7 ramifies. First satisfied condition wins; NONE means the
// criterion is silent, not that the group occurs.
enum class KMCondition { NONE, I, II, III };

const char* km_name(KMCondition c);
bool km_satisfies(const QuadField& K, KMCondition which);
KMCondition kenku_momose_Z18(const QuadField& K);

}  // namespace tq
