#pragma once

#include "treemeasure/boolean_combination.hpp"
#include "treemeasure/fo/formula.hpp"
#include "treemeasure/rational.hpp"
#include "treemeasure/tree.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treemeasure::fo {

struct LocalFormula {
    Formula formula;
    /// The single free variable (a fresh name if the formula has none).
    std::string variable;
};

/// ∃x1..xn pairwise at distance > 2r with φ_i(x_i), each φ_i r-local.
struct BasicLocalSentence {
    unsigned radius = 1;
    std::vector<LocalFormula> locals;
};

using GaifmanCombination = BoolCombination<BasicLocalSentence>;

struct GaifmanInput {
    AlphabetPtr alphabet;
    GaifmanCombination formula;
};

/// `alphabet:` header then one expression over and/or/not/true/false and
/// `(basic :r 1 (local φ) ...)`; `(local x φ)` names the variable explicitly.
GaifmanInput parse_gaifman(std::string_view text);
GaifmanInput load_gaifman(const std::string& path);

/// Declared radius 0 is treated as 1.
inline unsigned effective_radius(unsigned r) noexcept { return r == 0 ? 1 : r; }

/// Every quantifier is guarded by dist_le(k, x, ·) with k <= r and x the free
/// variable; the descendant atom is rejected.
bool validate_local(const Formula& phi, unsigned r);
bool validate_local(const LocalFormula& phi, unsigned r);

/// Truth of a basic sentence on a finite tree, witnesses pairwise farther than 2r.
bool model_check_basic(const FiniteTree& t, const BasicLocalSentence& s);

struct FoOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned threads = 0;
};

/// Local analyses with results cached per (formula, radius).
class LocalAnalyzer {
public:
    explicit LocalAnalyzer(AlphabetPtr alphabet, FoOptions options = {});

    /// Some full tree of height 2r+1 satisfies φ at a node of depth <= r.
    bool is_satisfiable(const LocalFormula& phi, unsigned r);
    /// Satisfied only at depth <= r (vacuously true when unsatisfiable).
    bool is_root_formula(const LocalFormula& phi, unsigned r);
    /// Whether φ holds at some node of exactly this depth in some tree.
    bool satisfiable_at_depth(const LocalFormula& phi, unsigned r, unsigned depth);

    /// ⊥, ⊤ (as ∃x.root(x)) or the localized root formula.
    Formula reduction(const BasicLocalSentence& s);

private:
    AlphabetPtr alphabet_;
    FoOptions options_;
    std::map<std::tuple<const void*, unsigned, unsigned>, bool> cache_;
};

bool is_satisfiable_local(const LocalFormula& phi, unsigned r, const AlphabetPtr& alphabet, const FoOptions& options = {});
bool is_root_formula(const LocalFormula& phi, unsigned r, const AlphabetPtr& alphabet, const FoOptions& options = {});
Formula compute_reduction(const BasicLocalSentence& s, const AlphabetPtr& alphabet, const FoOptions& options = {});

/// 2 * max effective radius + 1.
unsigned measure_height(const GaifmanCombination& f);

/// Fraction of full trees of measure_height satisfying the reduced combination.
Rational compute_measure_fo(const GaifmanCombination& f, const AlphabetPtr& alphabet, const FoOptions& options = {});

}  // namespace treemeasure::fo
