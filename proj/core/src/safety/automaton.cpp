#include "treemeasure/safety/automaton.hpp"

#include "treemeasure/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace treemeasure::safety {

SafetyAutomaton::SafetyAutomaton(AlphabetPtr alphabet, std::vector<std::string> states,
                                 std::vector<Transition> transitions, StateSet initial)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)) {
    if (!alphabet_) throw InputError("automaton needs an alphabet");
    const auto n = static_cast<State>(states_.size());
    for (const auto& t : transitions_) {
        if (t.state >= n || t.left >= n || t.right >= n) throw InputError("transition state out of range");
        if (t.symbol >= alphabet_->size()) throw InputError("transition symbol out of range");
    }
    if (!initial_.is_subset_of(all_states())) throw InputError("initial state out of range");
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
    by_symbol_.resize(alphabet_->size());
    for (const auto& t : transitions_) by_symbol_[t.symbol].push_back(t);
}

State SafetyAutomaton::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name) return static_cast<State>(i);
    throw InputError("unknown state '" + std::string(name) + "'");
}

StateSet SafetyAutomaton::powerset_delta(Symbol a, const StateSet& left, const StateSet& right) const {
    StateSet out;
    for (const auto& t : by_symbol_.at(a))
        if (!out.contains(t.state) && left.contains(t.left) && right.contains(t.right)) out.insert(t.state);
    return out;
}

std::string SafetyAutomaton::to_text() const {
    std::ostringstream os;
    os << "alphabet:";
    for (const auto& s : alphabet_->names()) os << ' ' << s;
    os << "\nstates:";
    for (const auto& s : states_) os << ' ' << s;
    os << "\ninitial:";
    for (State q : initial_.members()) os << ' ' << states_[q];
    os << '\n';
    for (const auto& t : transitions_)
        os << "trans: " << states_[t.state] << ' ' << alphabet_->name(t.symbol) << ' ' << states_[t.left] << ' '
           << states_[t.right] << '\n';
    return os.str();
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

}  // namespace

AutomatonFile parse_automaton(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    std::vector<std::string> initial;
    bool seen_alphabet = false, seen_states = false, seen_initial = false;
    struct RawTransition {
        std::vector<std::string> words;
        std::size_t line;
    };
    std::vector<RawTransition> raw;
    std::vector<std::pair<unsigned, Rational>> expectations;

    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw InputError("expected 'key: value'", line_no, first + 1);
        const std::string key = line.substr(first, colon - first);
        auto words = split_words(line.substr(colon + 1));
        if (key == "alphabet") {
            alphabet = words;
            seen_alphabet = true;
        } else if (key == "states") {
            states = words;
            seen_states = true;
        } else if (key == "initial") {
            initial = words;
            seen_initial = true;
        } else if (key == "trans") {
            if (words.size() != 4) throw InputError("trans needs 'q a qL qR'", line_no, colon + 2);
            raw.push_back({words, line_no});
        } else if (key == "expect") {
            if (words.size() != 2) throw InputError("expect needs 'depth p/q'", line_no, colon + 2);
            try {
                expectations.emplace_back(static_cast<unsigned>(std::stoul(words[0])), Rational::parse(words[1]));
            } catch (const std::logic_error&) {
                throw InputError("malformed expect line", line_no, colon + 2);
            } catch (const InputError&) {
                throw InputError("malformed expect line", line_no, colon + 2);
            }
        } else {
            throw InputError("unknown key '" + key + "'", line_no, first + 1);
        }
    }
    if (!seen_alphabet) throw InputError("missing 'alphabet:' line");
    if (!seen_states) throw InputError("missing 'states:' line");
    if (!seen_initial) throw InputError("missing 'initial:' line");

    auto sigma = Alphabet::make(alphabet);
    auto state_of = [&](const std::string& name, std::size_t line) -> State {
        auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) throw InputError("unknown state '" + name + "'", line, 1);
        return static_cast<State>(it - states.begin());
    };
    for (std::size_t i = 0; i < states.size(); ++i)
        if (std::find(states.begin(), states.begin() + static_cast<long>(i), states[i]) !=
            states.begin() + static_cast<long>(i))
            throw InputError("duplicate state '" + states[i] + "'");
    std::vector<Transition> transitions;
    for (const auto& r : raw) {
        auto symbol = sigma->find(r.words[1]);
        if (!symbol) throw InputError("unknown symbol '" + r.words[1] + "'", r.line, 1);
        transitions.push_back(
            {state_of(r.words[0], r.line), *symbol, state_of(r.words[2], r.line), state_of(r.words[3], r.line)});
    }
    StateSet init;
    for (const auto& q : initial) init.insert(state_of(q, 0));
    return {SafetyAutomaton(sigma, states, std::move(transitions), std::move(init)), std::move(expectations)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

AutomatonFile load_automaton(const std::string& path) { return parse_automaton(read_file(path)); }

StateSet powerset_delta(const SafetyAutomaton& a, Symbol symbol, const StateSet& left, const StateSet& right) {
    return a.powerset_delta(symbol, left, right);
}

StateSet type_of(const FiniteTree& t, const SafetyAutomaton& a) {
    if (!t.is_full()) throw InputError("type_of needs a full tree");
    const std::uint64_t n = t.node_count();
    const std::uint64_t first_leaf = n / 2;
    std::vector<StateSet> types(n);
    const StateSet all = a.all_states();
    for (std::uint64_t r = n; r-- > 0;) {
        if (r >= first_leaf)
            types[r] = all;
        else
            types[r] = a.powerset_delta(t.label_at_rank(r), types[2 * r + 1], types[2 * r + 2]);
    }
    return types[0];
}

bool accepts_prefix(const FiniteTree& t, const SafetyAutomaton& a) { return type_of(t, a).intersects(a.initial()); }

}  // namespace treemeasure::safety
