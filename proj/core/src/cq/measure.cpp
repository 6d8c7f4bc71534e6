#include "treemeasure/cq/measure.hpp"

#include "treemeasure/cq/compile.hpp"
#include "treemeasure/cq/firm.hpp"
#include "treemeasure/error.hpp"
#include "treemeasure/parallel.hpp"
#include "treemeasure/safety/fixpoint.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace treemeasure::cq {

namespace {

/// Undirected connected parts; every part holding a root mark is merged into one.
std::vector<std::vector<std::size_t>> placement_groups(const Pattern& p) {
    const std::size_t n = p.vertex_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    for (const auto& e : p.edges()) unite(e.source, e.target);
    std::optional<std::size_t> first_root;
    for (std::size_t v = 0; v < n; ++v)
        if (p.vertices()[v].root) {
            if (first_root) unite(v, *first_root);
            else first_root = v;
        }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [_, g] : groups) out.push_back(std::move(g));
    return out;
}

bool compatible(const Pattern& p, std::size_t v, std::size_t w) {
    const auto a = p.label(v), b = p.label(w);
    return !a || !b || *a == *b;
}

class PlacementSearch {
public:
    PlacementSearch(const Pattern& p, unsigned bound) : p_(p), bound_(bound), order_(search_order(p)) {
        h_.resize(p.vertex_count());
        placed_.assign(p.vertex_count(), 0);
    }

    std::optional<Assignment> run() {
        if (extend(0)) return h_;
        return std::nullopt;
    }

private:
    void within(const Position& u, unsigned max_depth, std::vector<Position>& out) const {
        // Strict descendants of u up to the bound, breadth first.
        std::vector<Position> frontier{u};
        for (unsigned d = u.depth(); d < max_depth; ++d) {
            std::vector<Position> next;
            for (const auto& w : frontier) {
                next.push_back(w.left());
                next.push_back(w.right());
            }
            out.insert(out.end(), next.begin(), next.end());
            frontier = std::move(next);
        }
    }

    void candidates(std::size_t v, std::vector<Position>& out) const {
        out.clear();
        if (p_.vertices()[v].root) {
            out.push_back(Position::root());
            return;
        }
        for (const auto& e : p_.edges()) {
            if (e.target == v && e.source != v && placed_[e.source]) {
                const Position& u = h_[e.source];
                if (u.depth() >= bound_) return;
                if (e.kind == EdgeKind::Left) out.push_back(u.left());
                else if (e.kind == EdgeKind::Right) out.push_back(u.right());
                else if (e.kind == EdgeKind::Child) out = {u.left(), u.right()};
                else within(u, bound_, out);
                return;
            }
            if (e.source == v && e.target != v && placed_[e.target]) {
                const Position& w = h_[e.target];
                if (w.is_root()) return;
                if (e.kind == EdgeKind::Descendant)
                    for (unsigned k = 0; k < w.depth(); ++k) out.push_back(w.prefix(k));
                else out.push_back(w.parent());
                return;
            }
        }
        out.push_back(Position::root());
        within(Position::root(), bound_, out);
    }

    bool consistent(std::size_t v) const {
        for (std::size_t w = 0; w < h_.size(); ++w)
            if ((placed_[w] || w == v) && h_[w] == h_[v] && !compatible(p_, v, w)) return false;
        for (const auto& e : p_.edges()) {
            if (e.source != v && e.target != v) continue;
            const std::size_t other = e.source == v ? e.target : e.source;
            if (other != v && !placed_[other]) continue;
            if (!edge_holds(e.kind, h_[e.source], h_[e.target])) return false;
        }
        return true;
    }

    bool extend(std::size_t i) {
        if (i == order_.size()) return true;
        const std::size_t v = order_[i];
        std::vector<Position> options;
        candidates(v, options);
        for (const auto& u : options) {
            h_[v] = u;
            if (!consistent(v)) continue;
            placed_[v] = 1;
            if (extend(i + 1)) return true;
            placed_[v] = 0;
        }
        return false;
    }

    const Pattern& p_;
    unsigned bound_;
    std::vector<std::size_t> order_;
    Assignment h_;
    std::vector<char> placed_;
};

std::uint64_t count_matching(const FullTreeEnumerator& trees, const std::function<bool(const FiniteTree&)>& accept,
                             unsigned threads) {
    return parallel_sum(
        trees.count(),
        [&](std::uint64_t begin, std::uint64_t end) {
            std::uint64_t hits = 0;
            for (std::uint64_t i = begin; i < end; ++i)
                if (accept(trees.tree_at(i))) ++hits;
            return hits;
        },
        threads);
}

Rational ratio_over(const FullTreeEnumerator& trees, std::uint64_t hits) {
    return Rational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(trees.count())));
}

bool use_enumeration(const AlphabetPtr& alphabet, unsigned height, const CqOptions& options) {
    if (options.strategy == CountStrategy::Compile) return false;
    if (options.strategy == CountStrategy::Enumerate) {
        checked_tree_count(alphabet->size(), height, options.budget);
        return true;
    }
    try {
        checked_tree_count(alphabet->size(), height, options.budget);
        return true;
    } catch (const BudgetError&) {
        return false;
    }
}

}  // namespace

unsigned satisfiability_depth_bound(const Pattern& p) {
    return p.vertex_count() <= 1 ? 0 : static_cast<unsigned>(2 * p.vertex_count() - 2);
}

std::optional<Assignment> find_placement(const Pattern& p) {
    if (p.has_label_conflict()) return std::nullopt;
    Assignment result(p.vertex_count());
    // Parts without a root mark are independent; each is shifted into its own
    // subtree below everything the rooted part uses.
    auto groups = placement_groups(p);
    std::stable_partition(groups.begin(), groups.end(), [&](const auto& g) {
        return std::any_of(g.begin(), g.end(), [&](std::size_t v) { return p.vertices()[v].root; });
    });
    unsigned base_depth = 0;
    while ((std::uint64_t{1} << base_depth) < groups.size()) ++base_depth;
    std::uint64_t slot = 0;
    bool shifted = false;
    for (const auto& g : groups) {
        const Pattern part = p.induced(g);
        auto h = PlacementSearch(part, satisfiability_depth_bound(part)).run();
        if (!h) return std::nullopt;
        if (part.has_root_mark()) {
            unsigned used = 0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                result[g[i]] = (*h)[i];
                used = std::max(used, (*h)[i].depth());
            }
            base_depth += used + 1;
            continue;
        }
        if (!shifted && groups.size() == 1) {
            for (std::size_t i = 0; i < g.size(); ++i) result[g[i]] = (*h)[i];
            continue;
        }
        shifted = true;
        const Position base = Position::from_bits(base_depth, slot++);
        for (std::size_t i = 0; i < g.size(); ++i) result[g[i]] = base.concat((*h)[i]);
    }
    return result;
}

bool is_satisfiable(const Pattern& p) { return find_placement(p).has_value(); }

std::optional<FiniteTree> satisfying_tree(const Pattern& p) {
    auto h = find_placement(p);
    if (!h) return std::nullopt;
    std::map<Position, Symbol> fixed;
    unsigned height = 0;
    for (std::size_t v = 0; v < h->size(); ++v) {
        height = std::max(height, (*h)[v].depth());
        if (auto a = p.label(v)) fixed[(*h)[v]] = *a;
    }
    return FiniteTree::generate(p.alphabet(), height, [&](const Position& u) {
        auto it = fixed.find(u);
        return it == fixed.end() ? Symbol{0} : it->second;
    });
}

unsigned decision_height(const Pattern& root_pattern) {
    return root_pattern.size() == 0 ? 0 : static_cast<unsigned>(root_pattern.size() - 1);
}

ReducedLeaf reduce_query(const Pattern& q) {
    if (!is_satisfiable(q)) return {ReducedLeaf::Kind::False, std::nullopt};
    auto root = root_subpattern(q);
    if (!root) return {ReducedLeaf::Kind::True, std::nullopt};
    return {ReducedLeaf::Kind::Rooted, std::move(root)};
}

Rational measure_cq(const Pattern& q, const CqOptions& options) {
    const auto leaf = reduce_query(q);
    if (leaf.kind == ReducedLeaf::Kind::False) return Rational(0);
    if (leaf.kind == ReducedLeaf::Kind::True) return Rational(1);
    const Pattern& p = *leaf.pattern;
    const unsigned height = decision_height(p);
    if (use_enumeration(p.alphabet(), height, options)) {
        const FullTreeEnumerator trees(p.alphabet(), height, options.budget);
        const auto hits = count_matching(trees, [&](const FiniteTree& t) { return satisfies(t, p); }, options.threads);
        return ratio_over(trees, hits);
    }
    return safety::exact_depth_measure(compile_pattern_to_safety(p), height + 1);
}

Rational measure_bccq(const BccqFormula& f, const AlphabetPtr& alphabet, const CqOptions& options) {
    std::vector<Pattern> rooted;
    const auto reduced = f.map<std::size_t>([&](const Pattern& q) -> BoolCombination<std::size_t> {
        auto leaf = reduce_query(q);
        if (leaf.kind == ReducedLeaf::Kind::False) return BoolCombination<std::size_t>::constant(false);
        if (leaf.kind == ReducedLeaf::Kind::True) return BoolCombination<std::size_t>::constant(true);
        rooted.push_back(std::move(*leaf.pattern));
        return BoolCombination<std::size_t>::leaf(rooted.size() - 1);
    });
    if (rooted.empty()) return reduced.evaluate([](std::size_t) { return false; }) ? Rational(1) : Rational(0);
    unsigned height = 0;
    for (const auto& p : rooted) height = std::max(height, decision_height(p));
    if (use_enumeration(alphabet, height, options)) {
        const FullTreeEnumerator trees(alphabet, height, options.budget);
        const auto hits = count_matching(
            trees,
            [&](const FiniteTree& t) { return reduced.evaluate([&](std::size_t i) { return satisfies(t, rooted[i]); }); },
            options.threads);
        return ratio_over(trees, hits);
    }
    std::vector<safety::SafetyAutomaton> automata;
    for (const auto& p : rooted) automata.push_back(compile_pattern_to_safety(p));
    return joint_depth_measure(
        automata, [&](const std::vector<bool>& v) { return reduced.evaluate([&](std::size_t i) { return bool(v[i]); }); },
        height + 1);
}

}  // namespace treemeasure::cq
