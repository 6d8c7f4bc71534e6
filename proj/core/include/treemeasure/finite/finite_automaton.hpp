#pragma once

#include "treemeasure/rational.hpp"
#include "treemeasure/safety/automaton.hpp"
#include "treemeasure/safety/fixpoint.hpp"
#include "treemeasure/tree.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treemeasure::finite {

using safety::State;

/// Internal transition; a missing child makes it unary.
struct InternalTransition {
    State state;
    Symbol symbol;
    std::optional<State> left;
    std::optional<State> right;

    bool is_binary() const noexcept { return left.has_value() && right.has_value(); }
    friend bool operator==(const InternalTransition&, const InternalTransition&) = default;
};

struct LeafTransition {
    State state;
    Symbol symbol;
    friend bool operator==(const LeafTransition&, const LeafTransition&) = default;
};

/// Top-down non-deterministic automaton on finite trees. A run labels each node
/// with a state; leaves need a leaf transition, the root an accepting state.
class FiniteTreeAutomaton {
public:
    FiniteTreeAutomaton(AlphabetPtr alphabet, std::vector<std::string> states,
                        std::vector<InternalTransition> internal, std::vector<LeafTransition> leaves,
                        safety::StateSet accepting);

    /// Accepts exactly the given tree.
    static FiniteTreeAutomaton singleton(const FiniteTree& tree);

    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    const std::vector<std::string>& state_names() const noexcept { return states_; }
    std::size_t state_count() const noexcept { return states_.size(); }
    const std::vector<InternalTransition>& internal() const noexcept { return internal_; }
    const std::vector<LeafTransition>& leaves() const noexcept { return leaves_; }
    const safety::StateSet& accepting() const noexcept { return accepting_; }

    /// States from which some run over t exists.
    safety::StateSet run_states(const FiniteTree& t) const;
    bool accepts(const FiniteTree& t) const;

    /// States accepting at least one full-branching finite tree.
    safety::StateSet productive_states() const;

private:
    safety::StateSet run_states_at(const FiniteTree& t, const Position& u) const;

    AlphabetPtr alphabet_;
    std::vector<std::string> states_;
    std::vector<InternalTransition> internal_;
    std::vector<LeafTransition> leaves_;
    safety::StateSet accepting_;
};

/// Finite-tree automaton file: the automaton format with `accept:` instead of
/// `initial:`, `leaf: q a` lines, and `-` for a missing child in `trans:` lines.
FiniteTreeAutomaton parse_finite_automaton(std::string_view text);
FiniteTreeAutomaton load_finite_automaton(const std::string& path);

/// Γ′ = Γ followed by one flat symbol per letter; flat(i) = n + i.
struct ExtendedAlphabet {
    AlphabetPtr base;
    AlphabetPtr extended;

    std::size_t base_size() const { return base->size(); }
    Symbol flat(Symbol a) const { return static_cast<Symbol>(base->size() + a); }
    bool is_flat(Symbol s) const { return s >= base->size(); }
    Symbol unflat(Symbol s) const { return static_cast<Symbol>(s - base->size()); }
};

ExtendedAlphabet extend_alphabet(const AlphabetPtr& alphabet);

struct Projection {
    enum class Status { Complete, Truncated };
    Status status;
    /// f(t); set only when Complete.
    std::optional<FiniteTree> tree;
};

/// f(t): keeps the nodes all of whose strict ancestors carry letters of Γ and
/// relabels flats by their letter. Truncated when a kept Γ-labelled node lacks children in t.
Projection project(const FiniteTree& t, const ExtendedAlphabet& sigma);

/// A full tree over Γ′ of height height(tau)+1 whose projection is tau: internal
/// nodes keep their letter, leaves become flats, everything below is `filler`.
/// Throws InputError unless every node of tau has zero or two children.
FiniteTree embed(const FiniteTree& tau, const ExtendedAlphabet& sigma, Symbol filler = 0);

struct LiftOptions {
    /// Add the state accepting trees with an infinite Γ-branch. Such trees form a
    /// null set; without it the iteration can stabilise exactly.
    bool track_unbounded = false;
    /// Drop states that accept no full-branching finite tree (they only admit null sets).
    bool trim = true;
};

/// Safety automaton over Γ′ whose language agrees with {t | t bounded ⇒ f(t) ∈ L(A)}
/// up to a null set.
safety::SafetyAutomaton lift_automaton(const FiniteTreeAutomaton& a, const ExtendedAlphabet& sigma,
                                       const LiftOptions& options = {});
safety::SafetyAutomaton lift_automaton(const FiniteTreeAutomaton& a, const LiftOptions& options = {});

safety::MeasureEstimate measure_finite_language(const FiniteTreeAutomaton& a,
                                                const safety::IterationOptions& options = {});

/// Whether A accepts some tree of height <= max_height with a node of exactly one child.
bool accepts_non_full_branching(const FiniteTreeAutomaton& a, unsigned max_height = 3);

/// (2|Γ|)^{-|dom tau|}: the probability that f maps a random Γ′-tree to tau.
Rational finite_tree_probability(const FiniteTree& tau);

}  // namespace treemeasure::finite
