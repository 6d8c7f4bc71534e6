#include "treemeasure/finite/finite_automaton.hpp"

#include "treemeasure/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace treemeasure::finite {

using safety::StateSet;

FiniteTreeAutomaton::FiniteTreeAutomaton(AlphabetPtr alphabet, std::vector<std::string> states,
                                         std::vector<InternalTransition> internal, std::vector<LeafTransition> leaves,
                                         StateSet accepting)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      internal_(std::move(internal)),
      leaves_(std::move(leaves)),
      accepting_(std::move(accepting)) {
    const auto n = static_cast<State>(states_.size());
    for (const auto& t : internal_) {
        if (t.state >= n || (t.left && *t.left >= n) || (t.right && *t.right >= n))
            throw InputError("transition state out of range");
        if (!t.left && !t.right) throw InputError("internal transition needs at least one child");
        if (t.symbol >= alphabet_->size()) throw InputError("transition symbol out of range");
    }
    for (const auto& t : leaves_)
        if (t.state >= n || t.symbol >= alphabet_->size()) throw InputError("leaf transition out of range");
    if (!accepting_.is_subset_of(StateSet::full(states_.size()))) throw InputError("accepting state out of range");
}

FiniteTreeAutomaton FiniteTreeAutomaton::singleton(const FiniteTree& tree) {
    const auto positions = tree.positions();
    std::map<Position, State> index;
    std::vector<std::string> names;
    for (const auto& u : positions) {
        index[u] = static_cast<State>(names.size());
        names.push_back("n_" + u.to_string());
    }
    std::vector<InternalTransition> internal;
    std::vector<LeafTransition> leaves;
    for (const auto& u : positions) {
        const bool l = u.depth() < Position::kMaxDepth && tree.contains(u.left());
        const bool r = u.depth() < Position::kMaxDepth && tree.contains(u.right());
        if (!l && !r) {
            leaves.push_back({index[u], tree.label(u)});
        } else {
            InternalTransition t{index[u], tree.label(u), std::nullopt, std::nullopt};
            if (l) t.left = index[u.left()];
            if (r) t.right = index[u.right()];
            internal.push_back(t);
        }
    }
    return FiniteTreeAutomaton(tree.alphabet(), names, internal, leaves, StateSet::of({0}));
}

StateSet FiniteTreeAutomaton::run_states_at(const FiniteTree& t, const Position& u) const {
    const bool has_l = u.depth() < Position::kMaxDepth && t.contains(u.left());
    const bool has_r = u.depth() < Position::kMaxDepth && t.contains(u.right());
    const Symbol a = t.label(u);
    StateSet out;
    if (!has_l && !has_r) {
        for (const auto& tr : leaves_)
            if (tr.symbol == a) out.insert(tr.state);
        return out;
    }
    const StateSet left = has_l ? run_states_at(t, u.left()) : StateSet{};
    const StateSet right = has_r ? run_states_at(t, u.right()) : StateSet{};
    for (const auto& tr : internal_) {
        if (tr.symbol != a || tr.left.has_value() != has_l || tr.right.has_value() != has_r) continue;
        if ((!has_l || left.contains(*tr.left)) && (!has_r || right.contains(*tr.right))) out.insert(tr.state);
    }
    return out;
}

StateSet FiniteTreeAutomaton::run_states(const FiniteTree& t) const { return run_states_at(t, Position::root()); }

bool FiniteTreeAutomaton::accepts(const FiniteTree& t) const { return run_states(t).intersects(accepting_); }

StateSet FiniteTreeAutomaton::productive_states() const {
    StateSet productive;
    for (const auto& t : leaves_) productive.insert(t.state);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& t : internal_) {
            if (!t.is_binary() || productive.contains(t.state)) continue;
            if (productive.contains(*t.left) && productive.contains(*t.right)) {
                productive.insert(t.state);
                changed = true;
            }
        }
    }
    return productive;
}

FiniteTreeAutomaton parse_finite_automaton(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> alphabet, states, accept;
    bool seen_alphabet = false, seen_states = false, seen_accept = false;
    struct Raw {
        std::vector<std::string> words;
        std::size_t line;
        bool leaf;
    };
    std::vector<Raw> raw;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw InputError("expected 'key: value'", line_no, first + 1);
        const std::string key = line.substr(first, colon - first);
        std::istringstream ws(line.substr(colon + 1));
        std::vector<std::string> words;
        for (std::string w; ws >> w;) words.push_back(w);
        if (key == "alphabet") {
            alphabet = words;
            seen_alphabet = true;
        } else if (key == "states") {
            states = words;
            seen_states = true;
        } else if (key == "accept") {
            accept = words;
            seen_accept = true;
        } else if (key == "trans") {
            if (words.size() != 4) throw InputError("trans needs 'q a qL qR' (use - for a missing child)", line_no, colon + 2);
            raw.push_back({words, line_no, false});
        } else if (key == "leaf") {
            if (words.size() != 2) throw InputError("leaf needs 'q a'", line_no, colon + 2);
            raw.push_back({words, line_no, true});
        } else {
            throw InputError("unknown key '" + key + "'", line_no, first + 1);
        }
    }
    if (!seen_alphabet) throw InputError("missing 'alphabet:' line");
    if (!seen_states) throw InputError("missing 'states:' line");
    if (!seen_accept) throw InputError("missing 'accept:' line");
    auto sigma = Alphabet::make(alphabet);
    auto state_of = [&](const std::string& name, std::size_t line) -> State {
        auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) throw InputError("unknown state '" + name + "'", line, 1);
        return static_cast<State>(it - states.begin());
    };
    auto symbol_of = [&](const std::string& name, std::size_t line) -> Symbol {
        auto s = sigma->find(name);
        if (!s) throw InputError("unknown symbol '" + name + "'", line, 1);
        return *s;
    };
    std::vector<InternalTransition> internal;
    std::vector<LeafTransition> leaves;
    for (const auto& r : raw) {
        if (r.leaf) {
            leaves.push_back({state_of(r.words[0], r.line), symbol_of(r.words[1], r.line)});
            continue;
        }
        InternalTransition t{state_of(r.words[0], r.line), symbol_of(r.words[1], r.line), std::nullopt, std::nullopt};
        if (r.words[2] != "-") t.left = state_of(r.words[2], r.line);
        if (r.words[3] != "-") t.right = state_of(r.words[3], r.line);
        if (!t.left && !t.right) throw InputError("transition needs at least one child", r.line, 1);
        internal.push_back(t);
    }
    StateSet accepting;
    for (const auto& q : accept) accepting.insert(state_of(q, 0));
    return FiniteTreeAutomaton(sigma, states, internal, leaves, accepting);
}

FiniteTreeAutomaton load_finite_automaton(const std::string& path) {
    return parse_finite_automaton(safety::read_file(path));
}

ExtendedAlphabet extend_alphabet(const AlphabetPtr& alphabet) {
    std::vector<std::string> names = alphabet->names();
    for (const auto& a : alphabet->names()) {
        std::string flat = "flat_" + a;
        while (std::find(names.begin(), names.end(), flat) != names.end()) flat += "'";
        names.push_back(flat);
    }
    return {alphabet, Alphabet::make(names)};
}

Projection project(const FiniteTree& t, const ExtendedAlphabet& sigma) {
    std::map<Position, Symbol> labels;
    std::vector<Position> stack{Position::root()};
    while (!stack.empty()) {
        const Position u = stack.back();
        stack.pop_back();
        const Symbol s = t.label(u);
        if (sigma.is_flat(s)) {
            labels[u] = sigma.unflat(s);
            continue;
        }
        labels[u] = s;
        if (u.depth() >= Position::kMaxDepth || !t.contains(u.left()) || !t.contains(u.right()))
            return {Projection::Status::Truncated, std::nullopt};
        stack.push_back(u.right());
        stack.push_back(u.left());
    }
    return {Projection::Status::Complete, FiniteTree::sparse(sigma.base, std::move(labels))};
}

FiniteTree embed(const FiniteTree& tau, const ExtendedAlphabet& sigma, Symbol filler) {
    for (const auto& u : tau.positions()) {
        const bool l = tau.contains(u.left()), r = tau.contains(u.right());
        if (l != r) throw InputError("tree is not full-branching at " + u.to_string());
    }
    return FiniteTree::generate(sigma.extended, tau.height() + 1, [&](const Position& u) -> Symbol {
        for (unsigned k = 0; k <= u.depth(); ++k) {
            const Position v = u.prefix(k);
            if (!tau.contains(v)) return filler;
            const bool leaf = !tau.contains(v.left());
            if (k == u.depth()) return leaf ? sigma.flat(tau.label(v)) : tau.label(v);
            if (leaf) return filler;
        }
        return filler;
    });
}

safety::SafetyAutomaton lift_automaton(const FiniteTreeAutomaton& a, const ExtendedAlphabet& sigma,
                                       const LiftOptions& options) {
    const StateSet keep = options.trim ? a.productive_states() : StateSet::full(a.state_count());
    std::vector<State> index(a.state_count(), 0);
    std::vector<std::string> names;
    for (State q : keep.members()) {
        index[q] = static_cast<State>(names.size());
        names.push_back(a.state_names()[q]);
    }
    const auto top = static_cast<State>(names.size());
    names.push_back("top");
    std::vector<safety::Transition> transitions;
    for (const auto& t : a.internal()) {
        if (!t.is_binary()) continue;  // unary nodes are outside the image of f
        if (!keep.contains(t.state) || !keep.contains(*t.left) || !keep.contains(*t.right)) continue;
        transitions.push_back({index[t.state], t.symbol, index[*t.left], index[*t.right]});
    }
    for (const auto& t : a.leaves())
        if (keep.contains(t.state)) transitions.push_back({index[t.state], sigma.flat(t.symbol), top, top});
    const auto symbols = static_cast<Symbol>(sigma.extended->size());
    for (Symbol s = 0; s < symbols; ++s) transitions.push_back({top, s, top, top});
    StateSet initial;
    for (State q : (a.accepting() & keep).members()) initial.insert(index[q]);
    if (options.track_unbounded) {
        const auto p = static_cast<State>(names.size());
        names.push_back("unbounded");
        for (Symbol s = 0; s < sigma.base_size(); ++s) {
            transitions.push_back({p, s, p, top});
            transitions.push_back({p, s, top, p});
        }
        initial.insert(p);
    }
    return safety::SafetyAutomaton(sigma.extended, names, transitions, initial);
}

safety::SafetyAutomaton lift_automaton(const FiniteTreeAutomaton& a, const LiftOptions& options) {
    return lift_automaton(a, extend_alphabet(a.alphabet()), options);
}

safety::MeasureEstimate measure_finite_language(const FiniteTreeAutomaton& a,
                                                const safety::IterationOptions& options) {
    return safety::iterate_measure(lift_automaton(a), options);
}

bool accepts_non_full_branching(const FiniteTreeAutomaton& a, unsigned max_height) {
    // plain: states accepting a full-branching tree; mixed: states accepting a
    // tree with a unary node; both within the current height.
    StateSet plain, mixed;
    for (const auto& t : a.leaves()) plain.insert(t.state);
    for (unsigned h = 1; h <= max_height; ++h) {
        StateSet next_plain = plain, next_mixed = mixed;
        const StateSet any = plain | mixed;
        for (const auto& t : a.internal()) {
            if (t.is_binary()) {
                if (plain.contains(*t.left) && plain.contains(*t.right)) next_plain.insert(t.state);
                if ((mixed.contains(*t.left) && any.contains(*t.right)) ||
                    (any.contains(*t.left) && mixed.contains(*t.right)))
                    next_mixed.insert(t.state);
            } else {
                const State child = t.left ? *t.left : *t.right;
                if (any.contains(child)) next_mixed.insert(t.state);
            }
        }
        plain = next_plain;
        mixed = next_mixed;
    }
    return mixed.intersects(a.accepting());
}

Rational finite_tree_probability(const FiniteTree& tau) {
    return Rational(BigInt(1), power(2 * tau.alphabet()->size(), tau.node_count()));
}

}  // namespace treemeasure::finite
