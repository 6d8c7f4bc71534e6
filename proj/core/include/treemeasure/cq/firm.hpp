#pragma once

#include "treemeasure/cq/pattern.hpp"

#include <optional>
#include <vector>

namespace treemeasure::cq {

/// Adjacency lists over vertex indices.
using Digraph = std::vector<std::vector<std::size_t>>;

/// Graph of connections: x -> y when x is root-marked, when x and y are joined
/// by a child edge (either direction), or when x -D-> y.
Digraph connections_graph(const Pattern& p);

/// Tarjan. Each component sorted; components ordered by their smallest vertex.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g);

/// Vertex sets of the firm sub-patterns.
std::vector<std::vector<std::size_t>> firm_components(const Pattern& p);
std::vector<Pattern> firm_decomposition(const Pattern& p);

/// The firm component holding the root marks, if the pattern has any.
std::optional<Pattern> root_subpattern(const Pattern& p);

bool is_firm(const Pattern& p);

}  // namespace treemeasure::cq
