#include "treemeasure/safety/certificate.hpp"

#include "treemeasure/error.hpp"

#include <cmath>
#include <sstream>

namespace treemeasure::safety {

namespace {

std::string index_name(std::string_view prefix, std::uint64_t mask) { return std::string(prefix) + std::to_string(mask + 1); }

std::string sum(const std::vector<std::string>& terms) {
    if (terms.empty()) return "0.0";
    if (terms.size() == 1) return terms.front();
    std::string out = "(+";
    for (const auto& t : terms) out += " " + t;
    return out + ")";
}

std::string conj(const std::vector<std::string>& parts) {
    if (parts.empty()) return "true";
    if (parts.size() == 1) return parts.front();
    std::string out = "(and";
    for (const auto& p : parts) out += "\n    " + p;
    return out + ")";
}

// φ_D over variables prefix_1..prefix_N.
std::string distribution_formula(std::string_view prefix, std::uint64_t n) {
    std::vector<std::string> parts, all;
    for (std::uint64_t i = 0; i < n; ++i) {
        parts.push_back("(>= " + index_name(prefix, i) + " 0.0)");
        all.push_back(index_name(prefix, i));
    }
    parts.push_back("(= " + sum(all) + " 1.0)");
    return conj(parts);
}

// φ_F(prefix, prefix): prefix is a fixpoint of ℱ.
std::string fixpoint_formula(const SafetyAutomaton& a, std::string_view prefix, std::uint64_t n) {
    const auto k = a.alphabet()->size();
    std::vector<std::vector<std::string>> terms(n);
    for (Symbol s = 0; s < k; ++s)
        for (std::uint64_t l = 0; l < n; ++l)
            for (std::uint64_t r = 0; r < n; ++r) {
                const auto out = a.powerset_delta(s, StateSet::from_mask(l), StateSet::from_mask(r)).low_mask();
                terms[out].push_back("(* " + index_name(prefix, l) + " " + index_name(prefix, r) + ")");
            }
    std::vector<std::string> parts;
    const std::string scale = "(/ 1.0 " + std::to_string(k) + ".0)";
    for (std::uint64_t i = 0; i < n; ++i)
        parts.push_back("(= " + index_name(prefix, i) + " (* " + scale + " " + sum(terms[i]) + "))");
    return conj(parts);
}

}  // namespace

std::string variable_name(const StateSet& r) { return index_name("x_", r.low_mask()); }

Certificate emit_real_formula(const SafetyAutomaton& a, std::size_t max_variables) {
    const std::size_t q = a.state_count();
    if (q >= 20 || (std::size_t{1} << q) > max_variables) {
        const std::string required = q >= 64 ? "2^" + std::to_string(q) : power(2, q).get_str();
        throw BudgetError("certificate needs " + required + " distribution variables, over the bound of " +
                              std::to_string(max_variables),
                          required);
    }
    const std::uint64_t n = std::uint64_t{1} << q;
    std::ostringstream os;
    os << "; measure certificate: m is the uniform measure of the automaton's language\n";
    os << "; x_i is the probability of the type with state mask i-1 (states:";
    for (const auto& s : a.state_names()) os << ' ' << s;
    os << ")\n(set-logic NRA)\n";
    for (std::uint64_t i = 0; i < n; ++i) os << "(declare-const " << index_name("x_", i) << " Real)\n";
    os << "(declare-const m Real)\n";

    os << "(assert (! " << distribution_formula("x_", n) << "\n  :named distribution))\n";
    os << "(assert (! " << fixpoint_formula(a, "x_", n) << "\n  :named fixpoint))\n";

    // Every fixpoint y lies ⪯-below x: for all 0/1 indicators ι of upward-closed families.
    std::string ys, is, guard_parts, lhs, rhs;
    std::vector<std::string> guards, ly, lx;
    for (std::uint64_t i = 0; i < n; ++i) {
        ys += (i ? " " : "") + std::string("(") + index_name("y_", i) + " Real)";
        is += (i ? " " : "") + std::string("(") + index_name("i_", i) + " Real)";
        guards.push_back("(= (* " + index_name("i_", i) + " " + index_name("i_", i) + ") " + index_name("i_", i) + ")");
        ly.push_back("(* " + index_name("y_", i) + " " + index_name("i_", i) + ")");
        lx.push_back("(* " + index_name("x_", i) + " " + index_name("i_", i) + ")");
    }
    for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t k = 0; k < n; ++k)
            if (j != k && (j & k) == j) guards.push_back("(<= " + index_name("i_", j) + " " + index_name("i_", k) + ")");
    const std::string order = "(forall (" + is + ")\n    (=> " + conj(guards) + "\n      (<= " + sum(ly) + " " + sum(lx) + ")))";
    os << "(assert (! (forall (" << ys << ")\n  (=> (and " << distribution_formula("y_", n) << "\n    "
       << fixpoint_formula(a, "y_", n) << ")\n    " << order << "))\n  :named greatest))\n";

    std::vector<std::string> accepting;
    for (std::uint64_t i = 0; i < n; ++i)
        if (StateSet::from_mask(i).intersects(a.initial())) accepting.push_back(index_name("x_", i));
    os << "(assert (! (= m " << sum(accepting) << ")\n  :named measure))\n";
    os << "(check-sat)\n(get-value (m))\n";
    return {os.str(), n, "m"};
}

SmtScript parse_smt(const std::string& text) {
    SmtScript script;
    for (auto& cmd : parse_sexprs(text)) {
        const auto head = cmd.head();
        if (head == "declare-const") {
            if (cmd.items.size() != 3 || !cmd.items[1].is_symbol()) fail_at(cmd, "malformed declare-const");
            script.constants.push_back(cmd.items[1].text);
        } else if (head == "assert") {
            if (cmd.items.size() != 2) fail_at(cmd, "malformed assert");
            SmtAssertion a;
            const SExpr& body = cmd.items[1];
            if (body.head() == "!") {
                a.body = body.items.at(1);
                for (std::size_t i = 2; i + 1 < body.items.size(); ++i)
                    if (body.items[i].is_symbol(":named")) a.name = body.items[i + 1].text;
            } else {
                a.body = body;
            }
            script.assertions.push_back(std::move(a));
        }
    }
    return script;
}

namespace {

Rational parse_number(const SExpr& e, Rational*) {
    const std::string& t = e.text;
    const auto dot = t.find('.');
    if (dot == std::string::npos) return Rational::parse(t);
    const std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    return Rational(BigInt(digits), power(10, t.size() - dot - 1));
}

double parse_number(const SExpr& e, double*) { return std::stod(e.text); }

bool is_number(const SExpr& e) {
    return e.is_symbol() && !e.text.empty() && (std::isdigit(static_cast<unsigned char>(e.text[0])) != 0);
}

template <class Number>
bool num_eq(const Number& a, const Number& b, double eps) {
    if constexpr (std::is_same_v<Number, double>)
        return std::abs(a - b) <= eps;
    else
        return a == b;
}

template <class Number>
bool num_le(const Number& a, const Number& b, double eps) {
    if constexpr (std::is_same_v<Number, double>)
        return a <= b + eps;
    else
        return a <= b;
}

// Variables v with a conjunct (= (* v v) v) in the guard of (=> guard body).
bool idempotent_guarded(const SExpr& body, const std::vector<std::string>& vars) {
    if (body.head() != "=>" || body.items.size() != 3) return false;
    const SExpr& guard = body.items[1];
    std::vector<const SExpr*> conjuncts;
    if (guard.head() == "and")
        for (std::size_t i = 1; i < guard.items.size(); ++i) conjuncts.push_back(&guard.items[i]);
    else
        conjuncts.push_back(&guard);
    for (const auto& v : vars) {
        bool found = false;
        for (const SExpr* c : conjuncts) {
            if (c->head() != "=" || c->items.size() != 3) continue;
            const SExpr& lhs = c->items[1];
            if (lhs.head() == "*" && lhs.items.size() == 3 && lhs.items[1].is_symbol(v) && lhs.items[2].is_symbol(v) &&
                c->items[2].is_symbol(v))
                found = true;
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

template <class Number>
Number SmtEvaluator::eval_num(const SExpr& e, std::map<std::string, Number>& env) const {
    if (e.is_symbol()) {
        if (is_number(e)) return parse_number(e, static_cast<Number*>(nullptr));
        auto it = env.find(e.text);
        if (it == env.end()) fail_at(e, "no value for '" + e.text + "'");
        return it->second;
    }
    const auto head = e.head();
    if (head.empty() || e.items.size() < 2) fail_at(e, "malformed term");
    if (head == "-" && e.items.size() == 2) return Number(0) - eval_num(e.items[1], env);
    Number acc = eval_num(e.items[1], env);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
        const Number v = eval_num(e.items[i], env);
        if (head == "+")
            acc += v;
        else if (head == "-")
            acc -= v;
        else if (head == "*")
            acc *= v;
        else if (head == "/")
            acc /= v;
        else
            fail_at(e, "unsupported operator '" + std::string(head) + "'");
    }
    return acc;
}

template <class Number>
bool SmtEvaluator::eval_forall(const SExpr& e, std::map<std::string, Number>& env) const {
    if (e.items.size() != 3 || !e.items[1].is_list()) fail_at(e, "malformed forall");
    std::vector<std::string> vars;
    for (const auto& binding : e.items[1].items) {
        if (!binding.is_list() || binding.items.empty()) fail_at(binding, "malformed binding");
        vars.push_back(binding.items[0].text);
    }
    const SExpr& body = e.items[2];
    auto saved = env;
    bool result = true;
    if (idempotent_guarded(body, vars)) {
        if (vars.size() > 20) fail_at(e, "too many 0/1 variables to enumerate");
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()) && result; ++bits) {
            for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = Number((bits >> i) & 1U ? 1 : 0);
            result = eval_bool(body, env);
        }
    } else {
        bool used = false;
        for (const auto& c : candidates_) {
            bool covers = true;
            for (const auto& v : vars) covers = covers && c.count(v);
            if (!covers) continue;
            used = true;
            for (const auto& v : vars) {
                if constexpr (std::is_same_v<Number, double>)
                    env[v] = c.at(v).to_double();
                else
                    env[v] = c.at(v);
            }
            if (!eval_bool(body, env)) {
                result = false;
                break;
            }
        }
        if (!used) fail_at(e, "no candidate instantiation for quantifier");
    }
    env = std::move(saved);
    return result;
}

template <class Number>
bool SmtEvaluator::eval_bool(const SExpr& e, std::map<std::string, Number>& env) const {
    if (e.is_symbol("true")) return true;
    if (e.is_symbol("false")) return false;
    const auto head = e.head();
    if (head == "and") {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            if (!eval_bool(e.items[i], env)) return false;
        return true;
    }
    if (head == "or") {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            if (eval_bool(e.items[i], env)) return true;
        return false;
    }
    if (head == "not") return !eval_bool(e.items.at(1), env);
    if (head == "=>") return !eval_bool(e.items.at(1), env) || eval_bool(e.items.at(2), env);
    if (head == "forall") return eval_forall(e, env);
    if (head == "=" || head == "<=" || head == ">=" || head == "<" || head == ">") {
        if (e.items.size() != 3) fail_at(e, "comparison needs two arguments");
        const Number a = eval_num(e.items[1], env);
        const Number b = eval_num(e.items[2], env);
        if (head == "=") return num_eq(a, b, eps_);
        if (head == "<=") return num_le(a, b, eps_);
        if (head == ">=") return num_le(b, a, eps_);
        if (head == "<") return a < b;
        return a > b;
    }
    fail_at(e, "unsupported formula '" + e.to_string().substr(0, 40) + "'");
}

bool SmtEvaluator::holds(const SExpr& formula) const {
    if (!exact_.empty() || approx_.empty()) {
        auto env = exact_;
        return eval_bool(formula, env);
    }
    auto env = approx_;
    return eval_bool(formula, env);
}

std::map<std::string, Rational> certificate_assignment(const SafetyAutomaton& a, const TypeDistribution& alpha) {
    std::map<std::string, Rational> out;
    const std::uint64_t n = std::uint64_t{1} << a.state_count();
    for (std::uint64_t i = 0; i < n; ++i) out[index_name("x_", i)] = alpha.at(StateSet::from_mask(i));
    out["m"] = alpha.measure(a.initial());
    return out;
}

std::map<std::string, double> certificate_assignment(const SafetyAutomaton& a, const FloatDistribution& alpha) {
    std::map<std::string, double> out;
    const std::uint64_t n = std::uint64_t{1} << a.state_count();
    for (std::uint64_t i = 0; i < n; ++i) out[index_name("x_", i)] = alpha.at(StateSet::from_mask(i));
    out["m"] = alpha.measure(a.initial());
    return out;
}

Instantiation greatest_clause_candidate(const SafetyAutomaton& a, const TypeDistribution& alpha) {
    Instantiation out;
    const std::uint64_t n = std::uint64_t{1} << a.state_count();
    for (std::uint64_t i = 0; i < n; ++i) out[index_name("y_", i)] = alpha.at(StateSet::from_mask(i));
    return out;
}

std::optional<TypeDistribution> rationalize_fixpoint(const SafetyAutomaton& a, const FloatDistribution& alpha,
                                                     long max_denominator) {
    TypeDistribution candidate;
    for (const auto& [r, w] : alpha.entries()) candidate.set(r, rational_approximation(w, max_denominator));
    if (candidate.total() != Rational(1)) return std::nullopt;
    if (!(apply_F(a, candidate) == candidate)) return std::nullopt;
    return candidate;
}

}  // namespace treemeasure::safety
