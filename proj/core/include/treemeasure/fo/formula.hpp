#pragma once

#include "treemeasure/sexpr.hpp"
#include "treemeasure/tree.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace treemeasure::fo {

enum class Op {
    True,
    False,
    Root,     // root(x)
    Label,    // label_a(x)
    ChildL,   // sL(x, y)
    ChildR,   // sR(x, y)
    Child,    // s(x, y)
    Anc,      // anc(x, y): x strict ancestor of y
    Eq,       // eq(x, y)
    DistLe,   // dist_le(k, x, y)
    DistGt,   // dist_gt(k, x, y)
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
};

bool is_atom(Op op) noexcept;

/// Immutable first-order formula over binary trees.
class Formula {
public:
    static Formula truth();
    static Formula falsity();
    static Formula root(std::string x);
    static Formula label(Symbol a, std::string x);
    static Formula binary(Op op, std::string x, std::string y);
    static Formula dist_le(unsigned k, std::string x, std::string y);
    static Formula dist_gt(unsigned k, std::string x, std::string y);
    static Formula negate(Formula f);
    static Formula conjunction(std::vector<Formula> args);
    static Formula disjunction(std::vector<Formula> args);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula exists(std::string var, Formula body);
    static Formula forall(std::string var, Formula body);

    Op op() const noexcept { return node_->op; }
    Symbol symbol() const noexcept { return node_->symbol; }
    unsigned radius() const noexcept { return node_->radius; }
    /// Atom arguments, or the bound variable of a quantifier.
    const std::vector<std::string>& vars() const noexcept { return node_->vars; }
    const std::vector<Formula>& args() const noexcept { return node_->args; }
    /// Identity of the shared node.
    const void* id() const noexcept { return node_.get(); }

    std::set<std::string> free_variables() const;
    /// Printed in the s-expression syntax accepted by parse_formula.
    std::string to_string(const Alphabet& alphabet) const;
    std::size_t size() const;

private:
    struct Node {
        Op op;
        Symbol symbol = 0;
        unsigned radius = 0;
        std::vector<std::string> vars;
        std::vector<Formula> args;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(Node n);

    std::shared_ptr<const Node> node_;
};

/// Syntax: true, false, (root x), (label a x), (sL x y), (sR x y), (s x y), (anc x y),
/// (eq x y), (dist_le k x y), (dist_gt k x y), (not f), (and f...), (or f...),
/// (implies f g), (exists y f), (forall y f). Quantifiers accept a variable list.
Formula parse_formula(const SExpr& e, const Alphabet& alphabet);

/// Replaces dist_le / dist_gt by formulas over the child relation and equality.
Formula expand_distance_macros(const Formula& f);

}  // namespace treemeasure::fo
