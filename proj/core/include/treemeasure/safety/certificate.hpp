#pragma once

#include "treemeasure/rational.hpp"
#include "treemeasure/safety/automaton.hpp"
#include "treemeasure/safety/distribution.hpp"
#include "treemeasure/sexpr.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace treemeasure::safety {

inline constexpr std::size_t kDefaultEmissionBound = 4096;

struct Certificate {
    std::string text;
    /// N = 2^|Q| distribution variables x_1..x_N; x_i is the mass of the set with mask i-1.
    std::size_t variables = 0;
    std::string measure_symbol = "m";
};

/// SMT-LIB 2 script (logic NRA) whose models fix m to the measure of L(A).
/// Assertions are named distribution, fixpoint, greatest and measure.
/// Throws BudgetError when 2^|Q| exceeds `max_variables`.
Certificate emit_real_formula(const SafetyAutomaton& a, std::size_t max_variables = kDefaultEmissionBound);

/// Name of the variable holding the mass of a state set.
std::string variable_name(const StateSet& r);

struct SmtAssertion {
    std::string name;
    SExpr body;
};

struct SmtScript {
    std::vector<std::string> constants;
    std::vector<SmtAssertion> assertions;
};

SmtScript parse_smt(const std::string& text);

/// Values for universally quantified variables, keyed by variable name.
using Instantiation = std::map<std::string, Rational>;

/// Substitution checker. Quantifiers are decided by enumeration: a forall whose
/// guard forces every bound variable to satisfy v*v = v ranges over {0,1};
/// any other forall ranges over the supplied candidate instantiations.
class SmtEvaluator {
public:
    explicit SmtEvaluator(std::map<std::string, Rational> values) : exact_(std::move(values)) {}
    /// Float mode: equalities hold within `eps`.
    SmtEvaluator(std::map<std::string, double> values, double eps) : approx_(std::move(values)), eps_(eps) {}

    void add_candidates(std::vector<Instantiation> candidates) { candidates_ = std::move(candidates); }

    bool holds(const SExpr& formula) const;

private:
    template <class Number>
    bool eval_bool(const SExpr& e, std::map<std::string, Number>& env) const;
    template <class Number>
    Number eval_num(const SExpr& e, std::map<std::string, Number>& env) const;
    template <class Number>
    bool eval_forall(const SExpr& e, std::map<std::string, Number>& env) const;

    std::map<std::string, Rational> exact_;
    std::map<std::string, double> approx_;
    double eps_ = 0;
    std::vector<Instantiation> candidates_;
};

/// Assignment x_i := α(R_i), m := 𝓜(α).
std::map<std::string, Rational> certificate_assignment(const SafetyAutomaton& a, const TypeDistribution& alpha);
std::map<std::string, double> certificate_assignment(const SafetyAutomaton& a, const FloatDistribution& alpha);

/// Same as an instantiation of the y-variables of the greatest clause.
Instantiation greatest_clause_candidate(const SafetyAutomaton& a, const TypeDistribution& alpha);

/// Rounds every entry to the nearest fraction with denominator <= max_denominator,
/// renormalising nothing; returns the result only if it is an exact fixpoint of ℱ.
std::optional<TypeDistribution> rationalize_fixpoint(const SafetyAutomaton& a, const FloatDistribution& alpha,
                                                     long max_denominator = 1000);

}  // namespace treemeasure::safety
