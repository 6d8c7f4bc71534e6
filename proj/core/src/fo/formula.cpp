#include "treemeasure/fo/formula.hpp"

#include "treemeasure/error.hpp"

#include <charconv>
#include <sstream>

namespace treemeasure::fo {

bool is_atom(Op op) noexcept {
    switch (op) {
        case Op::Not:
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Exists:
        case Op::Forall:
            return false;
        default:
            return true;
    }
}

Formula Formula::make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula Formula::truth() { return make({Op::True, 0, 0, {}, {}}); }
Formula Formula::falsity() { return make({Op::False, 0, 0, {}, {}}); }
Formula Formula::root(std::string x) { return make({Op::Root, 0, 0, {std::move(x)}, {}}); }
Formula Formula::label(Symbol a, std::string x) { return make({Op::Label, a, 0, {std::move(x)}, {}}); }

Formula Formula::binary(Op op, std::string x, std::string y) {
    return make({op, 0, 0, {std::move(x), std::move(y)}, {}});
}

Formula Formula::dist_le(unsigned k, std::string x, std::string y) {
    return make({Op::DistLe, 0, k, {std::move(x), std::move(y)}, {}});
}

Formula Formula::dist_gt(unsigned k, std::string x, std::string y) {
    return make({Op::DistGt, 0, k, {std::move(x), std::move(y)}, {}});
}

Formula Formula::negate(Formula f) { return make({Op::Not, 0, 0, {}, {std::move(f)}}); }
Formula Formula::conjunction(std::vector<Formula> args) { return make({Op::And, 0, 0, {}, std::move(args)}); }
Formula Formula::disjunction(std::vector<Formula> args) { return make({Op::Or, 0, 0, {}, std::move(args)}); }
Formula Formula::implies(Formula lhs, Formula rhs) {
    return make({Op::Implies, 0, 0, {}, {std::move(lhs), std::move(rhs)}});
}
Formula Formula::exists(std::string var, Formula body) {
    return make({Op::Exists, 0, 0, {std::move(var)}, {std::move(body)}});
}
Formula Formula::forall(std::string var, Formula body) {
    return make({Op::Forall, 0, 0, {std::move(var)}, {std::move(body)}});
}

std::set<std::string> Formula::free_variables() const {
    if (is_atom(op())) return {vars().begin(), vars().end()};
    std::set<std::string> out;
    for (const auto& a : args()) {
        auto s = a.free_variables();
        out.insert(s.begin(), s.end());
    }
    if (op() == Op::Exists || op() == Op::Forall) out.erase(vars()[0]);
    return out;
}

std::size_t Formula::size() const {
    std::size_t n = 1;
    for (const auto& a : args()) n += a.size();
    return n;
}

namespace {

const char* keyword(Op op) {
    switch (op) {
        case Op::True: return "true";
        case Op::False: return "false";
        case Op::Root: return "root";
        case Op::Label: return "label";
        case Op::ChildL: return "sL";
        case Op::ChildR: return "sR";
        case Op::Child: return "s";
        case Op::Anc: return "anc";
        case Op::Eq: return "eq";
        case Op::DistLe: return "dist_le";
        case Op::DistGt: return "dist_gt";
        case Op::Not: return "not";
        case Op::And: return "and";
        case Op::Or: return "or";
        case Op::Implies: return "implies";
        case Op::Exists: return "exists";
        case Op::Forall: return "forall";
    }
    return "?";
}

void print(std::ostream& os, const Formula& f, const Alphabet& alphabet) {
    if (f.op() == Op::True || f.op() == Op::False) {
        os << keyword(f.op());
        return;
    }
    os << '(' << keyword(f.op());
    if (f.op() == Op::Label) os << ' ' << alphabet.name(f.symbol());
    if (f.op() == Op::DistLe || f.op() == Op::DistGt) os << ' ' << f.radius();
    for (const auto& v : f.vars()) os << ' ' << v;
    for (const auto& a : f.args()) {
        os << ' ';
        print(os, a, alphabet);
    }
    os << ')';
}

const std::string& variable(const SExpr& e) {
    if (!e.is_symbol()) fail_at(e, "expected a variable");
    if (e.text.empty() || e.text[0] == '_') fail_at(e, "variable names may not start with '_'");
    return e.text;
}

unsigned natural(const SExpr& e) {
    unsigned k = 0;
    if (!e.is_symbol()) fail_at(e, "expected a natural number");
    auto [p, ec] = std::from_chars(e.text.data(), e.text.data() + e.text.size(), k);
    if (ec != std::errc() || p != e.text.data() + e.text.size()) fail_at(e, "expected a natural number, got '" + e.text + "'");
    return k;
}

void arity(const SExpr& e, std::size_t n) {
    if (e.items.size() != n + 1)
        fail_at(e, "'" + std::string(e.head()) + "' expects " + std::to_string(n) + " argument(s)");
}

}  // namespace

std::string Formula::to_string(const Alphabet& alphabet) const {
    std::ostringstream os;
    print(os, *this, alphabet);
    return os.str();
}

Formula parse_formula(const SExpr& e, const Alphabet& alphabet) {
    if (e.is_symbol("true")) return Formula::truth();
    if (e.is_symbol("false")) return Formula::falsity();
    if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) fail_at(e, "expected a formula");
    const std::string_view h = e.head();
    auto sub = [&](std::size_t i) { return parse_formula(e.items[i], alphabet); };
    if (h == "root") {
        arity(e, 1);
        return Formula::root(variable(e.items[1]));
    }
    if (h == "label") {
        arity(e, 2);
        const auto a = alphabet.find(e.items[1].text);
        if (!e.items[1].is_symbol() || !a) fail_at(e.items[1], "unknown symbol '" + e.items[1].text + "'");
        return Formula::label(*a, variable(e.items[2]));
    }
    const std::pair<std::string_view, Op> binaries[] = {{"sL", Op::ChildL}, {"sR", Op::ChildR}, {"s", Op::Child},
                                                        {"anc", Op::Anc},   {"eq", Op::Eq},     {"=", Op::Eq}};
    for (const auto& [name, op] : binaries)
        if (h == name) {
            arity(e, 2);
            return Formula::binary(op, variable(e.items[1]), variable(e.items[2]));
        }
    if (h == "dist_le" || h == "dist_gt") {
        arity(e, 3);
        const unsigned k = natural(e.items[1]);
        return h == "dist_le" ? Formula::dist_le(k, variable(e.items[2]), variable(e.items[3]))
                              : Formula::dist_gt(k, variable(e.items[2]), variable(e.items[3]));
    }
    if (h == "not") {
        arity(e, 1);
        return Formula::negate(sub(1));
    }
    if (h == "and" || h == "or") {
        std::vector<Formula> args;
        for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(sub(i));
        return h == "and" ? Formula::conjunction(std::move(args)) : Formula::disjunction(std::move(args));
    }
    if (h == "implies") {
        arity(e, 2);
        return Formula::implies(sub(1), sub(2));
    }
    if (h == "exists" || h == "forall") {
        arity(e, 2);
        std::vector<std::string> vars;
        if (e.items[1].is_list()) {
            for (const auto& v : e.items[1].items) vars.push_back(variable(v));
            if (vars.empty()) fail_at(e.items[1], "empty variable list");
        } else {
            vars.push_back(variable(e.items[1]));
        }
        Formula body = sub(2);
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            body = h == "exists" ? Formula::exists(*it, std::move(body)) : Formula::forall(*it, std::move(body));
        return body;
    }
    fail_at(e, "unknown formula head '" + std::string(h) + "'");
}

namespace {

class MacroExpander {
public:
    Formula expand(const Formula& f) {
        switch (f.op()) {
            case Op::DistLe:
                return within(f.radius(), f.vars()[0], f.vars()[1]);
            case Op::DistGt:
                return Formula::negate(within(f.radius(), f.vars()[0], f.vars()[1]));
            case Op::Not:
                return Formula::negate(expand(f.args()[0]));
            case Op::And:
            case Op::Or: {
                std::vector<Formula> args;
                for (const auto& a : f.args()) args.push_back(expand(a));
                return f.op() == Op::And ? Formula::conjunction(std::move(args)) : Formula::disjunction(std::move(args));
            }
            case Op::Implies:
                return Formula::implies(expand(f.args()[0]), expand(f.args()[1]));
            case Op::Exists:
                return Formula::exists(f.vars()[0], expand(f.args()[0]));
            case Op::Forall:
                return Formula::forall(f.vars()[0], expand(f.args()[0]));
            default:
                return f;
        }
    }

private:
    // d(x,y) <= k  iff  x = y or some neighbour z of x has d(z,y) <= k-1.
    Formula within(unsigned k, const std::string& x, const std::string& y) {
        Formula same = Formula::binary(Op::Eq, x, y);
        if (k == 0) return same;
        const std::string z = "_d" + std::to_string(counter_++);
        Formula neighbour =
            Formula::disjunction({Formula::binary(Op::Child, x, z), Formula::binary(Op::Child, z, x)});
        return Formula::disjunction(
            {same, Formula::exists(z, Formula::conjunction({neighbour, within(k - 1, z, y)}))});
    }

    std::size_t counter_ = 0;
};

}  // namespace

Formula expand_distance_macros(const Formula& f) { return MacroExpander().expand(f); }

}  // namespace treemeasure::fo
