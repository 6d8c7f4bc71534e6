#pragma once

#include "treemeasure/rational.hpp"
#include "treemeasure/safety/state_set.hpp"
#include "treemeasure/tree.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treemeasure::safety {

struct Transition {
    State state;
    Symbol symbol;
    State left;
    State right;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Non-deterministic top-down safety automaton <Γ, Q, δ, I> over infinite binary trees.
class SafetyAutomaton {
public:
    SafetyAutomaton(AlphabetPtr alphabet, std::vector<std::string> states, std::vector<Transition> transitions,
                    StateSet initial);

    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    std::size_t state_count() const noexcept { return states_.size(); }
    const std::vector<std::string>& state_names() const noexcept { return states_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    /// Transitions reading one symbol.
    const std::vector<Transition>& transitions_on(Symbol a) const { return by_symbol_.at(a); }
    const StateSet& initial() const noexcept { return initial_; }
    StateSet all_states() const { return StateSet::full(states_.size()); }
    State state_index(std::string_view name) const;

    /// δ̂_a(RL, RR) = {q | (q, a, qL, qR) ∈ δ, qL ∈ RL, qR ∈ RR}.
    StateSet powerset_delta(Symbol a, const StateSet& left, const StateSet& right) const;

    /// Text form accepted by parse_automaton.
    std::string to_text() const;

private:
    AlphabetPtr alphabet_;
    std::vector<std::string> states_;
    std::vector<Transition> transitions_;
    std::vector<std::vector<Transition>> by_symbol_;
    StateSet initial_;
};

/// Automaton file contents. `expect: d p/q` lines record golden depth-d measures.
struct AutomatonFile {
    SafetyAutomaton automaton;
    std::vector<std::pair<unsigned, Rational>> expectations;
};

AutomatonFile parse_automaton(std::string_view text);
AutomatonFile load_automaton(const std::string& path);

StateSet powerset_delta(const SafetyAutomaton& a, Symbol symbol, const StateSet& left, const StateSet& right);

/// Type of a full tree: Q at height 0, δ̂ of the children's types otherwise.
StateSet type_of(const FiniteTree& t, const SafetyAutomaton& a);

/// Whether A accepts the finite full tree t (type meets the initial states).
bool accepts_prefix(const FiniteTree& t, const SafetyAutomaton& a);

/// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace treemeasure::safety
