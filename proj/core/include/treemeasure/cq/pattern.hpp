#pragma once

#include "treemeasure/boolean_combination.hpp"
#include "treemeasure/sexpr.hpp"
#include "treemeasure/tree.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treemeasure::cq {

/// L, R: left/right child; S: some child; D: strict descendant.
enum class EdgeKind { Left, Right, Child, Descendant };

char edge_letter(EdgeKind k);

struct Edge {
    std::size_t source;
    EdgeKind kind;
    std::size_t target;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Vertex {
    std::string name;
    /// Label atoms; two different symbols make the pattern unsatisfiable.
    std::vector<Symbol> labels;
    bool root = false;
};

/// Conjunctive query over trees: a labelled graph with root marks.
class Pattern {
public:
    Pattern(AlphabetPtr alphabet, std::vector<Vertex> vertices, std::vector<Edge> edges);

    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    /// |π| = vertices + edges.
    std::size_t size() const noexcept { return vertices_.size() + edges_.size(); }

    bool has_root_mark() const;
    /// Some vertex carries two different label atoms.
    bool has_label_conflict() const;
    /// The single label of v, if any (first atom).
    std::optional<Symbol> label(std::size_t v) const;
    bool label_allows(std::size_t v, Symbol a) const;
    std::optional<std::size_t> find_vertex(std::string_view name) const;

    /// Sub-pattern induced by the given vertices (edges with both ends inside).
    Pattern induced(const std::vector<std::size_t>& members) const;

    std::string to_text() const;

private:
    AlphabetPtr alphabet_;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
};

/// Line format: `alphabet: a b`, `vertex: x label=a root`, `edge: x D y`, `#` comments.
Pattern parse_pattern(std::string_view text);
Pattern load_pattern(const std::string& path);

/// Inline pattern `(pattern (vertex x label=a root) (edge x D y) ...)`.
Pattern pattern_from_sexpr(const SExpr& e, const AlphabetPtr& alphabet);

using BccqFormula = BoolCombination<Pattern>;

struct BccqInput {
    AlphabetPtr alphabet;
    BccqFormula formula;
};

/// `alphabet:` header then one s-expression over and/or/not/true/false and
/// `(pattern "file")` or inline patterns. Relative files resolve against base_dir.
BccqInput parse_bccq(std::string_view text, const std::string& base_dir = ".");
BccqInput load_bccq(const std::string& path);

}  // namespace treemeasure::cq
