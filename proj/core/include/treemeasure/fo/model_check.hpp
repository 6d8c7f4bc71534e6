#pragma once

#include "treemeasure/fo/formula.hpp"
#include "treemeasure/position.hpp"
#include "treemeasure/tree.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace treemeasure::fo {

using Valuation = std::map<std::string, Position>;

/// Nodes of t within distance k of u, in breadth-first order of discovery.
std::vector<Position> ball(const FiniteTree& t, const Position& u, unsigned k);

/// Recursive evaluator over a compiled formula. Quantifier results are memoized
/// per tree, keyed by the positions of their free variables. Quantifiers whose
/// body pins the bound variable (root, eq, child or dist_le atoms in a top-level
/// conjunction or implication premise) only range over the pinned candidates.
/// Not thread-safe; use one instance per thread.
class ModelChecker {
public:
    explicit ModelChecker(const Formula& f);

    /// Throws InputError if a free variable is unbound or mapped outside dom(t).
    bool check(const FiniteTree& t, const Valuation& valuation = {});

    const std::vector<std::string>& free_variables() const noexcept { return free_; }

private:
    enum class Hint { None, Root, Same, Left, Right, Children, Parent, Ancestors, Ball };
    struct Node {
        Op op;
        Symbol symbol = 0;
        unsigned radius = 0;
        int a = -1, b = -1, var = -1;
        std::vector<int> kids;
        std::vector<int> free;  // slots, sorted
        Hint hint = Hint::None;
        int hint_slot = -1;
        unsigned hint_radius = 0;
    };

    int compile(const Formula& f);
    int slot(const std::string& name);
    void choose_hint(Node& n, const std::string& var, const Formula& body);
    bool eval(int id);
    void candidates(const Node& n, std::vector<Position>& out) const;

    std::vector<Node> nodes_;
    int root_ = -1;
    std::map<std::string, int> slots_;
    std::vector<std::string> free_;
    std::vector<int> free_slots_;

    const FiniteTree* tree_ = nullptr;
    std::vector<Position> all_;
    std::vector<Position> env_;
    std::vector<char> bound_;
    std::unordered_map<std::string, bool> memo_;
};

bool model_check(const FiniteTree& t, const Formula& f, const Valuation& valuation = {});

}  // namespace treemeasure::fo
