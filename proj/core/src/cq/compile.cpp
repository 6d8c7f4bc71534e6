#include "treemeasure/cq/compile.hpp"

#include "treemeasure/cq/firm.hpp"
#include "treemeasure/error.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <tuple>

namespace treemeasure::cq {

using safety::SafetyAutomaton;
using safety::State;
using safety::StateSet;
using safety::Transition;

namespace {

using Mask = std::uint32_t;

struct Key {
    unsigned depth;
    Mask here;
    Mask below;
    friend auto operator<=>(const Key&, const Key&) = default;
};

class Compiler {
public:
    explicit Compiler(const Pattern& p) : p_(p), n_(p.vertex_count()), limit_(static_cast<unsigned>(p.size() - 1)) {
        for (std::size_t v = 0; v < n_; ++v)
            if (p.vertices()[v].root) roots_ |= Mask{1} << v;
        names_.push_back("top");
    }

    SafetyAutomaton run() {
        const Mask all = n_ == 0 ? 0 : (Mask{1} << n_) - 1;
        StateSet initial;
        const Mask rest = all & ~roots_;
        // Enumerate subsets of the non-root vertices that sit at the root.
        for (Mask s = rest;; s = (s - 1) & rest) {
            const Mask here = roots_ | s;
            const Mask below = all & ~here;
            if (below == 0 || limit_ > 0) initial.insert(intern({0, here, below}));
            if (s == 0) break;
        }
        for (Symbol a = 0; a < p_.alphabet()->size(); ++a) transitions_.push_back({0, a, 0, 0});
        while (!queue_.empty()) {
            const auto [key, id] = queue_.front();
            queue_.pop_front();
            expand(key, id);
        }
        return SafetyAutomaton(p_.alphabet(), names_, transitions_, initial);
    }

private:
    State intern(const Key& k) {
        if (k.here == 0 && k.below == 0) return 0;
        auto [it, fresh] = ids_.try_emplace(k, static_cast<State>(names_.size()));
        if (fresh) {
            names_.push_back(name(k));
            queue_.push_back({k, it->second});
        }
        return it->second;
    }

    std::string name(const Key& k) const {
        std::ostringstream os;
        os << 'd' << k.depth << ":{";
        write(os, k.here);
        os << "}:{";
        write(os, k.below);
        os << '}';
        return os.str();
    }

    void write(std::ostream& os, Mask m) const {
        bool first = true;
        for (std::size_t v = 0; v < n_; ++v)
            if (m >> v & 1U) {
                if (!first) os << ',';
                os << p_.vertices()[v].name;
                first = false;
            }
    }

    static bool in(Mask m, std::size_t v) { return (m >> v) & 1U; }

    void expand(const Key& k, State id) {
        // Edges leaving the vertices placed here fix where their targets go.
        Mask need_left = 0, need_right = 0, need_child = 0;
        for (const auto& e : p_.edges()) {
            if (in(k.here, e.target) && !in(k.here, e.source) && !in(k.below, e.source)) continue;
            if (in(k.here, e.target)) return;  // target here: the source would have to be above
            if (!in(k.here, e.source)) continue;
            if (!in(k.below, e.target)) return;
            switch (e.kind) {
                case EdgeKind::Left: need_left |= Mask{1} << e.target; break;
                case EdgeKind::Right: need_right |= Mask{1} << e.target; break;
                case EdgeKind::Child: need_child |= Mask{1} << e.target; break;
                case EdgeKind::Descendant: break;
            }
        }
        if ((k.depth == limit_ && k.below != 0) || k.depth > limit_) return;
        const bool last = k.depth + 1 == limit_;

        std::vector<Key> children_left, children_right;
        std::vector<std::pair<Key, Key>> splits;
        std::vector<std::size_t> pending;
        for (std::size_t v = 0; v < n_; ++v)
            if (in(k.below, v)) pending.push_back(v);
        // Each pending vertex goes to one of: left-here, left-below, right-here, right-below.
        std::vector<unsigned> slot(pending.size(), 0);
        while (true) {
            Key l{k.depth + 1, 0, 0}, r{k.depth + 1, 0, 0};
            for (std::size_t i = 0; i < pending.size(); ++i) {
                const Mask bit = Mask{1} << pending[i];
                switch (slot[i]) {
                    case 0: l.here |= bit; break;
                    case 1: l.below |= bit; break;
                    case 2: r.here |= bit; break;
                    default: r.below |= bit; break;
                }
            }
            if (admissible(l, r, need_left, need_right, need_child, last)) splits.push_back({l, r});
            std::size_t i = 0;
            while (i < slot.size() && ++slot[i] == 4) slot[i++] = 0;
            if (i == slot.size()) break;
        }
        for (Symbol a = 0; a < p_.alphabet()->size(); ++a) {
            bool ok = true;
            for (std::size_t v = 0; v < n_ && ok; ++v)
                if (in(k.here, v) && !p_.label_allows(v, a)) ok = false;
            if (!ok) continue;
            for (const auto& [l, r] : splits) transitions_.push_back({id, a, intern(l), intern(r)});
        }
    }

    bool admissible(const Key& l, const Key& r, Mask need_left, Mask need_right, Mask need_child, bool last) const {
        if (last && (l.below != 0 || r.below != 0)) return false;
        if ((need_left & ~l.here) != 0 || (need_right & ~r.here) != 0) return false;
        if ((need_child & ~(l.here | r.here)) != 0) return false;
        // Pending vertices joined by an edge stay on one side, target strictly under source.
        for (const auto& e : p_.edges()) {
            const bool src_l = in(l.here | l.below, e.source), src_r = in(r.here | r.below, e.source);
            if (!src_l && !src_r) continue;
            const Key& side = src_l ? l : r;
            if (!in(side.below, e.target)) return false;
        }
        return true;
    }

    const Pattern& p_;
    std::size_t n_;
    unsigned limit_;
    Mask roots_ = 0;
    std::vector<std::string> names_;
    std::vector<Transition> transitions_;
    std::map<Key, State> ids_;
    std::deque<std::pair<Key, State>> queue_;
};

}  // namespace

SafetyAutomaton compile_pattern_to_safety(const Pattern& p) {
    if (!p.has_root_mark()) throw InputError("compile: pattern has no root mark");
    if (!is_firm(p)) throw InputError("compile: pattern is not firm");
    if (p.vertex_count() > kMaxCompiledVertices)
        throw ResourceError("compile: pattern has more than " + std::to_string(kMaxCompiledVertices) + " vertices");
    return Compiler(p).run();
}

Rational joint_depth_measure(const std::vector<SafetyAutomaton>& automata,
                             const std::function<bool(const std::vector<bool>&)>& combine, unsigned depth) {
    if (automata.empty()) return combine({}) ? Rational(1) : Rational(0);
    const auto& alphabet = automata.front().alphabet();
    const unsigned long k = alphabet->size();
    using Tuple = std::vector<StateSet>;
    std::map<Tuple, BigInt> level;
    {
        Tuple start;
        for (const auto& a : automata) start.push_back(a.all_states());
        level.emplace(std::move(start), BigInt(1));
    }
    std::vector<std::map<std::tuple<StateSet, StateSet, Symbol>, StateSet>> cache(automata.size());
    for (unsigned d = 0; d < depth; ++d) {
        std::map<Tuple, BigInt> next;
        for (const auto& [left, cl] : level)
            for (const auto& [right, cr] : level) {
                const BigInt c = cl * cr;
                for (Symbol a = 0; a < k; ++a) {
                    Tuple t(automata.size());
                    for (std::size_t i = 0; i < automata.size(); ++i) {
                        auto key = std::make_tuple(left[i], right[i], a);
                        auto it = cache[i].find(key);
                        if (it == cache[i].end())
                            it = cache[i].emplace(key, automata[i].powerset_delta(a, left[i], right[i])).first;
                        t[i] = it->second;
                    }
                    next[std::move(t)] += c;
                }
            }
        level = std::move(next);
    }
    BigInt accepted = 0, total = 0;
    for (const auto& [t, c] : level) {
        total += c;
        std::vector<bool> verdicts;
        for (std::size_t i = 0; i < automata.size(); ++i) verdicts.push_back(t[i].intersects(automata[i].initial()));
        if (combine(verdicts)) accepted += c;
    }
    return Rational(accepted, total);
}

}  // namespace treemeasure::cq
