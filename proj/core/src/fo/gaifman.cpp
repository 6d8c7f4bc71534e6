#include "treemeasure/fo/gaifman.hpp"

#include "treemeasure/error.hpp"
#include "treemeasure/fo/model_check.hpp"
#include "treemeasure/parallel.hpp"
#include "treemeasure/safety/automaton.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

namespace treemeasure::fo {

namespace {

LocalFormula parse_local(const SExpr& e, const Alphabet& alphabet) {
    if (e.items.size() == 3 && e.items[1].is_symbol()) {
        LocalFormula out{parse_formula(e.items[2], alphabet), e.items[1].text};
        const auto free = out.formula.free_variables();
        if (free.size() > 1 || (free.size() == 1 && !free.count(out.variable)))
            fail_at(e, "local formula has free variables other than '" + out.variable + "'");
        return out;
    }
    if (e.items.size() != 2) fail_at(e, "expected (local φ) or (local x φ)");
    LocalFormula out{parse_formula(e.items[1], alphabet), "x"};
    const auto free = out.formula.free_variables();
    if (free.size() > 1) fail_at(e, "local formula has more than one free variable");
    if (free.size() == 1) out.variable = *free.begin();
    return out;
}

BasicLocalSentence parse_basic(const SExpr& e, const Alphabet& alphabet) {
    BasicLocalSentence s;
    bool have_radius = false;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& item = e.items[i];
        if (item.is_symbol(":r")) {
            if (i + 1 >= e.items.size() || !e.items[i + 1].is_symbol()) fail_at(item, ":r needs a natural number");
            const std::string& text = e.items[i + 1].text;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), s.radius);
            if (ec != std::errc() || p != text.data() + text.size()) fail_at(e.items[i + 1], "bad radius '" + text + "'");
            have_radius = true;
            ++i;
            continue;
        }
        if (!item.is_list() || item.head() != "local") fail_at(item, "expected (local ...)");
        s.locals.push_back(parse_local(item, alphabet));
        if (!validate_local(s.locals.back(), effective_radius(s.radius)))
            fail_at(item, "local formula is not " + std::to_string(effective_radius(s.radius)) +
                              "-local: every quantifier needs a dist_le guard on '" + s.locals.back().variable + "'");
    }
    if (!have_radius) fail_at(e, "basic sentence without :r");
    if (s.locals.empty()) fail_at(e, "basic sentence without local formulas");
    return s;
}

GaifmanCombination parse_combination(const SExpr& e, const Alphabet& alphabet) {
    using G = GaifmanCombination;
    if (e.is_symbol("true")) return G::constant(true);
    if (e.is_symbol("false")) return G::constant(false);
    if (!e.is_list() || e.items.empty()) fail_at(e, "expected a Boolean combination of basic sentences");
    const std::string_view h = e.head();
    if (h == "basic") return G::leaf(parse_basic(e, alphabet));
    if (h == "not") {
        if (e.items.size() != 2) fail_at(e, "'not' expects one argument");
        return G::negate(parse_combination(e.items[1], alphabet));
    }
    if (h == "and" || h == "or") {
        std::vector<G> args;
        for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse_combination(e.items[i], alphabet));
        return h == "and" ? G::conjunction(std::move(args)) : G::disjunction(std::move(args));
    }
    fail_at(e, "unknown combinator '" + std::string(h) + "'");
}

// Quantifier guard: dist_le(k, x, y) or dist_le(k, y, x) with k <= r.
bool is_guard(const Formula& g, const std::string& x, const std::string& y, unsigned r) {
    if (g.op() != Op::DistLe || g.radius() > r) return false;
    const auto& v = g.vars();
    return (v[0] == x && v[1] == y) || (v[0] == y && v[1] == x);
}

bool any_guard(const Formula& premise, const std::string& x, const std::string& y, unsigned r) {
    if (is_guard(premise, x, y, r)) return true;
    if (premise.op() != Op::And) return false;
    return std::any_of(premise.args().begin(), premise.args().end(),
                       [&](const Formula& g) { return is_guard(g, x, y, r); });
}

bool guarded(const Formula& f, const std::string& x, unsigned r) {
    if (f.op() == Op::Anc) return false;
    if (f.op() == Op::Exists || f.op() == Op::Forall) {
        const std::string& y = f.vars()[0];
        if (y == x) return false;
        const Formula& body = f.args()[0];
        bool ok = false;
        if (f.op() == Op::Exists) ok = any_guard(body, x, y, r);
        else if (body.op() == Op::Implies) ok = any_guard(body.args()[0], x, y, r);
        else if (body.op() == Op::Or)
            ok = std::any_of(body.args().begin(), body.args().end(), [&](const Formula& g) {
                return g.op() == Op::Not && any_guard(g.args()[0], x, y, r);
            });
        if (!ok) return false;
    }
    return std::all_of(f.args().begin(), f.args().end(), [&](const Formula& g) { return guarded(g, x, r); });
}

std::string fresh(const std::string& base, const std::set<std::string>& taken) {
    std::string name = "_" + base;
    while (taken.count(name)) name += "_";
    return name;
}

}  // namespace

GaifmanInput parse_gaifman(std::string_view text) {
    const HeaderedSource src = parse_headered(text);
    if (src.alphabet.empty()) throw InputError("missing 'alphabet:' header", 1, 1);
    auto alphabet = Alphabet::make(src.alphabet);
    if (src.body.size() != 1) {
        if (src.body.empty()) throw InputError("missing formula");
        fail_at(src.body[1], "expected a single top-level formula");
    }
    return {alphabet, parse_combination(src.body[0], *alphabet)};
}

GaifmanInput load_gaifman(const std::string& path) { return parse_gaifman(safety::read_file(path)); }

bool validate_local(const Formula& phi, unsigned r) {
    const auto free = phi.free_variables();
    if (free.size() > 1) return false;
    return guarded(phi, free.empty() ? std::string("x") : *free.begin(), r);
}

bool validate_local(const LocalFormula& phi, unsigned r) {
    const auto free = phi.formula.free_variables();
    if (free.size() > 1 || (free.size() == 1 && *free.begin() != phi.variable)) return false;
    return guarded(phi.formula, phi.variable, r);
}

bool model_check_basic(const FiniteTree& t, const BasicLocalSentence& s) {
    const unsigned r = effective_radius(s.radius);
    const auto positions = t.positions();
    // Candidate witnesses for each local formula.
    std::vector<std::vector<Position>> sat(s.locals.size());
    for (std::size_t i = 0; i < s.locals.size(); ++i) {
        ModelChecker mc(s.locals[i].formula);
        for (const auto& u : positions) {
            Valuation v;
            if (!mc.free_variables().empty()) v[s.locals[i].variable] = u;
            if (mc.check(t, v)) sat[i].push_back(u);
        }
    }
    std::vector<Position> chosen;
    std::function<bool(std::size_t)> pick = [&](std::size_t i) {
        if (i == sat.size()) return true;
        for (const auto& u : sat[i]) {
            if (std::any_of(chosen.begin(), chosen.end(), [&](const Position& w) { return distance(u, w) <= 2 * r; }))
                continue;
            chosen.push_back(u);
            if (pick(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return pick(0);
}

LocalAnalyzer::LocalAnalyzer(AlphabetPtr alphabet, FoOptions options)
    : alphabet_(std::move(alphabet)), options_(options) {}

bool LocalAnalyzer::satisfiable_at_depth(const LocalFormula& phi, unsigned r, unsigned depth) {
    r = effective_radius(r);
    if (!validate_local(phi, r)) throw InputError("formula is not " + std::to_string(r) + "-local");
    const auto key = std::make_tuple(phi.formula.id(), r, depth);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    // Only the r-ball of the node is inspected; other nodes keep the first symbol.
    const unsigned height = std::max(2 * r + 1, depth + r);
    const FiniteTree blank =
        FiniteTree::generate(alphabet_, height, [](const Position&) { return Symbol{0}; });
    ModelChecker mc(phi.formula);
    const bool uses_var = !mc.free_variables().empty();
    const std::size_t k = alphabet_->size();
    bool found = false;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << depth) && !found; ++bits) {
        const Position u = Position::from_bits(depth, bits);
        const auto nodes = ball(blank, u, r);
        BigInt count = power(k, nodes.size());
        if (count > BigInt(static_cast<unsigned long>(options_.budget)))
            throw BudgetError("enumeration infeasible: " + count.get_str() + " labelings of a radius-" +
                                  std::to_string(r) + " ball exceed the budget of " + std::to_string(options_.budget),
                              count.get_str());
        const std::uint64_t n = count.get_ui();
        std::vector<Symbol> labels = blank.dense_labels();
        Valuation v;
        if (uses_var) v[phi.variable] = u;
        for (std::uint64_t i = 0; i < n && !found; ++i) {
            std::uint64_t rest = i;
            for (const auto& w : nodes) {
                labels[w.bfs_rank()] = static_cast<Symbol>(rest % k);
                rest /= k;
            }
            found = mc.check(FiniteTree::full(alphabet_, height, labels), v);
        }
    }
    cache_.emplace(key, found);
    return found;
}

bool LocalAnalyzer::is_satisfiable(const LocalFormula& phi, unsigned r) {
    r = effective_radius(r);
    for (unsigned d = 0; d <= r; ++d)
        if (satisfiable_at_depth(phi, r, d)) return true;
    return false;
}

bool LocalAnalyzer::is_root_formula(const LocalFormula& phi, unsigned r) {
    r = effective_radius(r);
    if (!is_satisfiable(phi, r)) return true;
    // Below depth r the ball no longer meets the root and its shape depends only
    // on the last r steps, so depth r+1 stands for every deeper node.
    return !satisfiable_at_depth(phi, r, r + 1);
}

Formula LocalAnalyzer::reduction(const BasicLocalSentence& s) {
    const unsigned r = effective_radius(s.radius);
    const LocalFormula* root = nullptr;
    std::size_t roots = 0;
    for (const auto& phi : s.locals) {
        if (!is_satisfiable(phi, r)) return Formula::falsity();
        if (is_root_formula(phi, r)) {
            ++roots;
            root = &phi;
        }
    }
    if (roots == 0) return Formula::exists("x", Formula::root("x"));
    if (roots > 1) return Formula::falsity();
    const std::string z = fresh("root", root->formula.free_variables());
    return Formula::exists(z, Formula::conjunction({Formula::root(z),
                                                   Formula::exists(root->variable,
                                                                   Formula::conjunction({Formula::dist_le(r, z, root->variable),
                                                                                         root->formula}))}));
}

bool is_satisfiable_local(const LocalFormula& phi, unsigned r, const AlphabetPtr& alphabet, const FoOptions& options) {
    return LocalAnalyzer(alphabet, options).is_satisfiable(phi, r);
}

bool is_root_formula(const LocalFormula& phi, unsigned r, const AlphabetPtr& alphabet, const FoOptions& options) {
    return LocalAnalyzer(alphabet, options).is_root_formula(phi, r);
}

Formula compute_reduction(const BasicLocalSentence& s, const AlphabetPtr& alphabet, const FoOptions& options) {
    return LocalAnalyzer(alphabet, options).reduction(s);
}

unsigned measure_height(const GaifmanCombination& f) {
    unsigned r = 1;
    f.for_each_leaf([&](const BasicLocalSentence& s) { r = std::max(r, effective_radius(s.radius)); });
    return 2 * r + 1;
}

Rational compute_measure_fo(const GaifmanCombination& f, const AlphabetPtr& alphabet, const FoOptions& options) {
    const unsigned height = measure_height(f);
    const FullTreeEnumerator trees(alphabet, height, options.budget);
    LocalAnalyzer analyzer(alphabet, options);
    std::vector<Formula> reductions;
    const auto reduced = f.map<std::size_t>([&](const BasicLocalSentence& s) {
        Formula r = analyzer.reduction(s);
        if (r.op() == Op::False) return BoolCombination<std::size_t>::constant(false);
        if (r.op() == Op::Exists && r.args()[0].op() == Op::Root) return BoolCombination<std::size_t>::constant(true);
        reductions.push_back(std::move(r));
        return BoolCombination<std::size_t>::leaf(reductions.size() - 1);
    });
    if (reductions.empty()) return reduced.evaluate([](std::size_t) { return false; }) ? Rational(1) : Rational(0);
    const std::uint64_t hits = parallel_sum(
        trees.count(),
        [&](std::uint64_t begin, std::uint64_t end) {
            std::vector<ModelChecker> checkers;
            for (const auto& r : reductions) checkers.emplace_back(r);
            std::uint64_t n = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                const FiniteTree t = trees.tree_at(i);
                if (reduced.evaluate([&](std::size_t k) { return checkers[k].check(t); })) ++n;
            }
            return n;
        },
        options.threads);
    return Rational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(trees.count())));
}

}  // namespace treemeasure::fo
