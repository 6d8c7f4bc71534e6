#include "treemeasure/cq/firm.hpp"

#include <algorithm>
#include <functional>

namespace treemeasure::cq {

Digraph connections_graph(const Pattern& p) {
    const std::size_t n = p.vertex_count();
    Digraph g(n);
    auto add = [&](std::size_t x, std::size_t y) {
        if (std::find(g[x].begin(), g[x].end(), y) == g[x].end()) g[x].push_back(y);
    };
    for (std::size_t x = 0; x < n; ++x)
        if (p.vertices()[x].root)
            for (std::size_t y = 0; y < n; ++y) add(x, y);
    for (const auto& e : p.edges()) {
        add(e.source, e.target);
        if (e.kind != EdgeKind::Descendant) add(e.target, e.source);
    }
    for (auto& adj : g) std::sort(adj.begin(), adj.end());
    return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const Digraph& g) {
    const std::size_t n = g.size();
    constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnseen), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    std::size_t counter = 0;
    std::vector<std::vector<std::size_t>> out;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (std::size_t w : g[v]) {
            if (index[w] == kUnseen) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == kUnseen) visit(v);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

std::vector<std::vector<std::size_t>> firm_components(const Pattern& p) {
    return strongly_connected_components(connections_graph(p));
}

std::vector<Pattern> firm_decomposition(const Pattern& p) {
    std::vector<Pattern> out;
    for (const auto& c : firm_components(p)) out.push_back(p.induced(c));
    return out;
}

std::optional<Pattern> root_subpattern(const Pattern& p) {
    for (const auto& c : firm_components(p))
        for (std::size_t v : c)
            if (p.vertices()[v].root) return p.induced(c);
    return std::nullopt;
}

bool is_firm(const Pattern& p) { return firm_components(p).size() <= 1; }

}  // namespace treemeasure::cq
