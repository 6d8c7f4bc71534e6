#pragma once

#include "treemeasure/cq/homomorphism.hpp"
#include "treemeasure/cq/pattern.hpp"
#include "treemeasure/rational.hpp"

#include <optional>

namespace treemeasure::cq {

/// Placements are searched at depth at most 2|V| - 2 per connected part.
unsigned satisfiability_depth_bound(const Pattern& p);

/// A vertex-to-position map satisfying edges, root marks and label consistency.
std::optional<Assignment> find_placement(const Pattern& p);
bool is_satisfiable(const Pattern& p);
/// Full tree realising a placement (unconstrained nodes get the first symbol).
std::optional<FiniteTree> satisfying_tree(const Pattern& p);

enum class CountStrategy { Enumerate, Compile, Auto };

struct CqOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    CountStrategy strategy = CountStrategy::Auto;
    unsigned threads = 0;
};

/// Height of the prefix that decides a rooted firm pattern.
unsigned decision_height(const Pattern& root_pattern);

/// Leaf after root-pattern extraction.
struct ReducedLeaf {
    enum class Kind { False, True, Rooted } kind;
    std::optional<Pattern> pattern;
};
ReducedLeaf reduce_query(const Pattern& q);

Rational measure_cq(const Pattern& q, const CqOptions& options = {});
Rational measure_bccq(const BccqFormula& f, const AlphabetPtr& alphabet, const CqOptions& options = {});

}  // namespace treemeasure::cq
