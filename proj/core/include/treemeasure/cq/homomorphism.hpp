#pragma once

#include "treemeasure/cq/pattern.hpp"
#include "treemeasure/position.hpp"
#include "treemeasure/tree.hpp"

#include <optional>
#include <vector>

namespace treemeasure::cq {

/// Image of each vertex, indexed like Pattern::vertices().
using Assignment = std::vector<Position>;

/// Whether positions u, v stand in the relation of an edge u -kind-> v.
bool edge_holds(EdgeKind kind, const Position& u, const Position& v) noexcept;

/// Checks conditions of a homomorphism: edges, root marks, labels.
bool is_homomorphism(const FiniteTree& t, const Pattern& p, const Assignment& h);

/// Backtracking search in a static vertex order: root-marked vertices first,
/// then the vertex with most edges to placed ones (ties: degree, declaration order).
std::optional<Assignment> check_homomorphism(const FiniteTree& t, const Pattern& p);

/// Tries every vertex-to-node map in lexicographic order. Exponential; for cross-checks.
std::optional<Assignment> exhaustive_homomorphism(const FiniteTree& t, const Pattern& p);

inline bool satisfies(const FiniteTree& t, const Pattern& p) { return check_homomorphism(t, p).has_value(); }

/// The static search order used by check_homomorphism.
std::vector<std::size_t> search_order(const Pattern& p);

}  // namespace treemeasure::cq
