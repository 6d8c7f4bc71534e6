#include "treemeasure/cq/homomorphism.hpp"

#include <algorithm>

namespace treemeasure::cq {

bool edge_holds(EdgeKind kind, const Position& u, const Position& v) noexcept {
    switch (kind) {
        case EdgeKind::Left:
            return v.depth() == u.depth() + 1 && u.is_prefix_of(v) && v.last() == Direction::Left;
        case EdgeKind::Right:
            return v.depth() == u.depth() + 1 && u.is_prefix_of(v) && v.last() == Direction::Right;
        case EdgeKind::Child:
            return v.depth() == u.depth() + 1 && u.is_prefix_of(v);
        case EdgeKind::Descendant:
            return u.is_strict_prefix_of(v);
    }
    return false;
}

bool is_homomorphism(const FiniteTree& t, const Pattern& p, const Assignment& h) {
    if (h.size() != p.vertex_count()) return false;
    for (std::size_t v = 0; v < h.size(); ++v) {
        if (!t.contains(h[v])) return false;
        if (p.vertices()[v].root && !h[v].is_root()) return false;
        if (!p.label_allows(v, t.label(h[v]))) return false;
    }
    for (const auto& e : p.edges())
        if (!edge_holds(e.kind, h[e.source], h[e.target])) return false;
    return true;
}

std::vector<std::size_t> search_order(const Pattern& p) {
    const std::size_t n = p.vertex_count();
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : p.edges()) {
        ++degree[e.source];
        ++degree[e.target];
    }
    std::vector<std::size_t> order;
    std::vector<char> placed(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (p.vertices()[v].root) {
            order.push_back(v);
            placed[v] = 1;
        }
    while (order.size() < n) {
        std::size_t best = n, best_links = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (placed[v]) continue;
            std::size_t links = 0;
            for (const auto& e : p.edges())
                if ((e.source == v && placed[e.target]) || (e.target == v && placed[e.source])) ++links;
            if (best == n || links > best_links || (links == best_links && degree[v] > degree[best])) {
                best = v;
                best_links = links;
            }
        }
        order.push_back(best);
        placed[best] = 1;
    }
    return order;
}

namespace {

class Search {
public:
    Search(const FiniteTree& t, const Pattern& p) : t_(t), p_(p), order_(search_order(p)), h_(p.vertex_count()) {
        placed_.assign(p.vertex_count(), 0);
        all_ = t.positions();
    }

    std::optional<Assignment> run() {
        if (p_.has_label_conflict()) return std::nullopt;
        if (extend(0)) return h_;
        return std::nullopt;
    }

private:
    void candidates(std::size_t v, std::vector<Position>& out) const {
        out.clear();
        if (p_.vertices()[v].root) {
            out.push_back(Position::root());
            return;
        }
        // Anchor on the most selective edge to a placed vertex.
        int best_rank = 4;
        const Edge* anchor = nullptr;
        for (const auto& e : p_.edges()) {
            int rank = 4;
            if (e.target == v && placed_[e.source] && e.source != v)
                rank = e.kind == EdgeKind::Descendant ? 3 : (e.kind == EdgeKind::Child ? 1 : 0);
            else if (e.source == v && placed_[e.target] && e.target != v)
                rank = e.kind == EdgeKind::Descendant ? 2 : 0;
            if (rank < best_rank) {
                best_rank = rank;
                anchor = &e;
            }
        }
        if (!anchor) {
            out = all_;
            return;
        }
        if (anchor->target == v) {
            const Position& u = h_[anchor->source];
            if (u.depth() >= Position::kMaxDepth) return;
            switch (anchor->kind) {
                case EdgeKind::Left:
                    out.push_back(u.left());
                    break;
                case EdgeKind::Right:
                    out.push_back(u.right());
                    break;
                case EdgeKind::Child:
                    out.push_back(u.left());
                    out.push_back(u.right());
                    break;
                case EdgeKind::Descendant:
                    for (const auto& w : all_)
                        if (u.is_strict_prefix_of(w)) out.push_back(w);
                    break;
            }
        } else {
            const Position& w = h_[anchor->target];
            if (w.is_root()) return;
            if (anchor->kind == EdgeKind::Descendant) {
                for (unsigned k = 0; k < w.depth(); ++k) out.push_back(w.prefix(k));
            } else {
                out.push_back(w.parent());
            }
        }
    }

    bool consistent(std::size_t v) const {
        const Position& u = h_[v];
        if (!t_.contains(u)) return false;
        if (!p_.label_allows(v, t_.label(u))) return false;
        for (const auto& e : p_.edges()) {
            if (e.source != v && e.target != v) continue;
            const std::size_t other = e.source == v ? e.target : e.source;
            if (other != v && !placed_[other]) continue;
            if (!edge_holds(e.kind, h_[e.source], h_[e.target])) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order_.size()) return true;
        const std::size_t v = order_[depth];
        std::vector<Position> options;
        candidates(v, options);
        placed_[v] = 1;
        for (const auto& u : options) {
            h_[v] = u;
            if (consistent(v) && extend(depth + 1)) return true;
        }
        placed_[v] = 0;
        return false;
    }

    const FiniteTree& t_;
    const Pattern& p_;
    std::vector<std::size_t> order_;
    Assignment h_;
    std::vector<char> placed_;
    std::vector<Position> all_;
};

}  // namespace

std::optional<Assignment> exhaustive_homomorphism(const FiniteTree& t, const Pattern& p) {
    const auto nodes = t.positions();
    const std::size_t n = p.vertex_count();
    std::vector<std::size_t> digits(n, 0);
    Assignment h(n);
    while (true) {
        for (std::size_t v = 0; v < n; ++v) h[v] = nodes[digits[v]];
        if (is_homomorphism(t, p, h)) return h;
        std::size_t i = 0;
        while (i < n && ++digits[i] == nodes.size()) digits[i++] = 0;
        if (i == n) return std::nullopt;
    }
}

std::optional<Assignment> check_homomorphism(const FiniteTree& t, const Pattern& p) { return Search(t, p).run(); }

}  // namespace treemeasure::cq
