#include "treemeasure/fo/model_check.hpp"

#include "treemeasure/error.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace treemeasure::fo {

std::vector<Position> ball(const FiniteTree& t, const Position& u, unsigned k) {
    std::vector<Position> out;
    if (!t.contains(u)) return out;
    std::set<Position> seen{u};
    std::deque<std::pair<Position, unsigned>> queue{{u, 0}};
    while (!queue.empty()) {
        auto [v, d] = queue.front();
        queue.pop_front();
        out.push_back(v);
        if (d == k) continue;
        auto visit = [&](const Position& w) {
            if (t.contains(w) && seen.insert(w).second) queue.push_back({w, d + 1});
        };
        if (!v.is_root()) visit(v.parent());
        if (v.depth() < Position::kMaxDepth) {
            visit(v.left());
            visit(v.right());
        }
    }
    return out;
}

ModelChecker::ModelChecker(const Formula& f) {
    root_ = compile(f);
    for (const auto& name : f.free_variables()) {
        free_.push_back(name);
        free_slots_.push_back(slots_.at(name));
    }
}

int ModelChecker::slot(const std::string& name) {
    auto [it, fresh] = slots_.try_emplace(name, static_cast<int>(slots_.size()));
    return it->second;
}

int ModelChecker::compile(const Formula& f) {
    Node n;
    n.op = f.op();
    n.symbol = f.symbol();
    n.radius = f.radius();
    if (is_atom(f.op())) {
        if (!f.vars().empty()) n.a = slot(f.vars()[0]);
        if (f.vars().size() > 1) n.b = slot(f.vars()[1]);
    } else {
        if (f.op() == Op::Exists || f.op() == Op::Forall) n.var = slot(f.vars()[0]);
        for (const auto& a : f.args()) n.kids.push_back(compile(a));
        if (n.var >= 0) choose_hint(n, f.vars()[0], f.args()[0]);
    }
    for (const auto& name : f.free_variables()) n.free.push_back(slot(name));
    std::sort(n.free.begin(), n.free.end());
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

void ModelChecker::choose_hint(Node& n, const std::string& var, const Formula& body) {
    // Conjuncts that must hold for the quantified variable to matter.
    std::vector<Formula> conjuncts;
    auto collect = [&](const Formula& g) {
        if (g.op() == Op::And) conjuncts.insert(conjuncts.end(), g.args().begin(), g.args().end());
        else conjuncts.push_back(g);
    };
    if (n.op == Op::Exists) {
        collect(body);
    } else if (body.op() == Op::Implies) {
        collect(body.args()[0]);
    } else if (body.op() == Op::Or) {
        for (const auto& a : body.args())
            if (a.op() == Op::Not) collect(a.args()[0]);
    }
    int best = 100;
    for (const auto& c : conjuncts) {
        if (!is_atom(c.op())) continue;
        const auto& v = c.vars();
        Hint hint = Hint::None;
        std::string other;
        unsigned radius = 0;
        int rank = 100;
        auto rel = [&](Hint forward, Hint backward) {
            // forward: var is the second argument.
            if (v[1] == var && v[0] != var) {
                hint = forward;
                other = v[0];
            } else if (v[0] == var && v[1] != var) {
                hint = backward;
                other = v[1];
            }
        };
        switch (c.op()) {
            case Op::Root:
                if (v[0] == var) hint = Hint::Root;
                rank = 0;
                break;
            case Op::Eq:
                rel(Hint::Same, Hint::Same);
                rank = 0;
                break;
            case Op::ChildL:
                rel(Hint::Left, Hint::Parent);
                rank = 1;
                break;
            case Op::ChildR:
                rel(Hint::Right, Hint::Parent);
                rank = 1;
                break;
            case Op::Child:
                rel(Hint::Children, Hint::Parent);
                rank = 2;
                break;
            case Op::Anc:
                if (v[0] == var && v[1] != var) {
                    hint = Hint::Ancestors;
                    other = v[1];
                }
                rank = 3;
                break;
            case Op::DistLe:
                rel(Hint::Ball, Hint::Ball);
                radius = c.radius();
                rank = 4;
                break;
            default:
                break;
        }
        if (hint != Hint::None && rank < best) {
            best = rank;
            n.hint = hint;
            n.hint_slot = hint == Hint::Root ? -1 : slot(other);
            n.hint_radius = radius;
        }
    }
}

void ModelChecker::candidates(const Node& n, std::vector<Position>& out) const {
    out.clear();
    if (n.hint == Hint::None) {
        out = all_;
        return;
    }
    if (n.hint == Hint::Root) {
        out.push_back(Position::root());
        return;
    }
    const Position& x = env_[n.hint_slot];
    switch (n.hint) {
        case Hint::Same:
            out.push_back(x);
            break;
        case Hint::Left:
            if (x.depth() < Position::kMaxDepth) out.push_back(x.left());
            break;
        case Hint::Right:
            if (x.depth() < Position::kMaxDepth) out.push_back(x.right());
            break;
        case Hint::Children:
            if (x.depth() < Position::kMaxDepth) out = {x.left(), x.right()};
            break;
        case Hint::Parent:
            if (!x.is_root()) out.push_back(x.parent());
            break;
        case Hint::Ancestors:
            for (unsigned k = 0; k < x.depth(); ++k) out.push_back(x.prefix(k));
            break;
        case Hint::Ball:
            out = ball(*tree_, x, n.hint_radius);
            return;
        default:
            break;
    }
    out.erase(std::remove_if(out.begin(), out.end(), [&](const Position& p) { return !tree_->contains(p); }),
              out.end());
}

bool ModelChecker::eval(int id) {
    const Node& n = nodes_[id];
    auto pos = [&](int s) -> const Position& { return env_[s]; };
    switch (n.op) {
        case Op::True:
            return true;
        case Op::False:
            return false;
        case Op::Root:
            return pos(n.a).is_root();
        case Op::Label:
            return tree_->label(pos(n.a)) == n.symbol;
        case Op::ChildL:
        case Op::ChildR:
        case Op::Child: {
            const Position &x = pos(n.a), &y = pos(n.b);
            if (y.is_root() || y.parent() != x) return false;
            if (n.op == Op::ChildL) return y.last() == Direction::Left;
            if (n.op == Op::ChildR) return y.last() == Direction::Right;
            return true;
        }
        case Op::Anc:
            return pos(n.a).is_strict_prefix_of(pos(n.b));
        case Op::Eq:
            return pos(n.a) == pos(n.b);
        case Op::DistLe:
            return distance(pos(n.a), pos(n.b)) <= n.radius;
        case Op::DistGt:
            return distance(pos(n.a), pos(n.b)) > n.radius;
        case Op::Not:
            return !eval(n.kids[0]);
        case Op::And:
            for (int k : n.kids)
                if (!eval(k)) return false;
            return true;
        case Op::Or:
            for (int k : n.kids)
                if (eval(k)) return true;
            return false;
        case Op::Implies:
            return !eval(n.kids[0]) || eval(n.kids[1]);
        case Op::Exists:
        case Op::Forall:
            break;
    }
    std::string key = std::to_string(id);
    for (int s : n.free) {
        key += ':';
        key += std::to_string(env_[s].bfs_rank());
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const Position saved = env_[n.var];
    const char saved_bound = bound_[n.var];
    std::vector<Position> options;
    candidates(n, options);
    const bool want = n.op == Op::Exists;
    bool result = !want;
    bound_[n.var] = 1;
    for (const auto& u : options) {
        env_[n.var] = u;
        if (eval(n.kids[0]) == want) {
            result = want;
            break;
        }
    }
    env_[n.var] = saved;
    bound_[n.var] = saved_bound;
    memo_.emplace(std::move(key), result);
    return result;
}

bool ModelChecker::check(const FiniteTree& t, const Valuation& valuation) {
    tree_ = &t;
    all_ = t.positions();
    env_.assign(slots_.size(), Position::root());
    bound_.assign(slots_.size(), 0);
    memo_.clear();
    for (std::size_t i = 0; i < free_.size(); ++i) {
        auto it = valuation.find(free_[i]);
        if (it == valuation.end()) throw InputError("unbound free variable '" + free_[i] + "'");
        if (!t.contains(it->second))
            throw InputError("variable '" + free_[i] + "' is mapped outside the tree: " + it->second.to_string());
        env_[free_slots_[i]] = it->second;
        bound_[free_slots_[i]] = 1;
    }
    return eval(root_);
}

bool model_check(const FiniteTree& t, const Formula& f, const Valuation& valuation) {
    return ModelChecker(f).check(t, valuation);
}

}  // namespace treemeasure::fo
