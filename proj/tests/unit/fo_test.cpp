#include "oracles.hpp"

#include "treemeasure/error.hpp"
#include "treemeasure/fo/formula.hpp"
#include "treemeasure/fo/gaifman.hpp"
#include "treemeasure/fo/model_check.hpp"
#include "treemeasure/sexpr.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace treemeasure;
using namespace treemeasure::fo;

namespace {

std::string fixture(const std::string& name) { return std::string(TM_FIXTURE_DIR) + "/" + name; }

Rational q(long p, long d) { return Rational(BigInt(p), BigInt(d)); }

const AlphabetPtr& ab() {
    static const AlphabetPtr g = Alphabet::make({"a", "b"});
    return g;
}

Formula parse(const std::string& text, const AlphabetPtr& g = ab()) { return parse_formula(parse_sexprs(text).at(0), *g); }

LocalFormula local(const std::string& text) { return {parse(text), "x"}; }

FiniteTree random_tree(std::mt19937_64& rng, unsigned height, const AlphabetPtr& g = ab()) {
    return FiniteTree::generate(g, height, [&](const Position&) { return static_cast<Symbol>(rng() % g->size()); });
}

/// Copy of t one level deeper, new leaves labelled by `fill`.
FiniteTree extend(const FiniteTree& t, const std::function<Symbol(const Position&)>& fill) {
    return FiniteTree::generate(t.alphabet(), t.height() + 1,
                                [&](const Position& u) { return t.contains(u) ? t.label(u) : fill(u); });
}

}  // namespace

TEST(Formula, ParseAndPrint) {
    const auto f = parse("(exists y (and (dist_le 1 x y) (sL x y) (label a y)))");
    EXPECT_EQ(f.op(), Op::Exists);
    EXPECT_EQ(f.free_variables(), (std::set<std::string>{"x"}));
    EXPECT_EQ(parse(f.to_string(*ab())).to_string(*ab()), f.to_string(*ab()));
    EXPECT_EQ(parse("(forall (y z) (eq y z))").args()[0].op(), Op::Forall);
    EXPECT_THROW(parse("(label c x)"), InputError);
    EXPECT_THROW(parse("(sL x)"), InputError);
    EXPECT_THROW(parse("(exists _y (root _y))"), InputError);
}

TEST(ModelCheck, Examples) {
    const auto g3 = Alphabet::make({"a", "b", "c"});
    const auto one = FiniteTree::parse(ab(), "(a)");
    EXPECT_TRUE(model_check(one, parse("(exists x (and (root x) (label a x)))")));
    EXPECT_FALSE(model_check(one, parse("(exists x (label b x))")));
    const auto t = FiniteTree::parse(g3, "(a (b) (c))");
    EXPECT_TRUE(model_check(t, parse("(exists (x y) (and (sL x y) (label b y)))", g3)));
    EXPECT_FALSE(model_check(t, parse("(exists (x y) (and (sR x y) (label b y)))", g3)));
    EXPECT_THROW(model_check(t, parse("(label a x)", g3)), InputError);
    EXPECT_TRUE(model_check(t, parse("(label c x)", g3), {{"x", Position::parse("R")}}));
}

TEST(ModelCheck, AtomsMatchPositions) {
    std::mt19937_64 rng(8);
    const auto t = random_tree(rng, 3);
    const auto all = t.positions();
    const auto le2 = parse("(dist_le 2 x y)"), gt1 = parse("(dist_gt 1 x y)"), anc = parse("(anc x y)"),
               child = parse("(s x y)"), left = parse("(sL x y)");
    for (const auto& u : all)
        for (const auto& v : all) {
            const Valuation val{{"x", u}, {"y", v}};
            EXPECT_EQ(model_check(t, le2, val), distance(u, v) <= 2);
            EXPECT_EQ(model_check(t, gt1, val), distance(u, v) > 1);
            EXPECT_EQ(model_check(t, anc, val), u.is_strict_prefix_of(v));
            EXPECT_EQ(model_check(t, child, val), u.is_prefix_of(v) && v.depth() == u.depth() + 1);
            EXPECT_EQ(model_check(t, left, val), !v.is_root() && v.parent() == u && v.last() == Direction::Left);
        }
}

TEST(ModelCheck, BallContents) {
    const auto t = FiniteTree::generate(ab(), 3, [](const Position&) { return Symbol{0}; });
    for (const auto& u : t.positions())
        for (unsigned k = 0; k <= 3; ++k) {
            std::size_t expected = 0;
            for (const auto& v : t.positions()) expected += distance(u, v) <= k;
            EXPECT_EQ(ball(t, u, k).size(), expected);
        }
}

TEST(Macros, ExpansionPreservesTruth) {
    std::mt19937_64 rng(21);
    const std::vector<std::string> texts = {
        "(dist_le 0 x y)", "(dist_le 1 x y)", "(dist_le 3 x y)", "(dist_gt 2 x y)",
        "(exists z (and (dist_le 2 x z) (label b z) (dist_gt 1 z y)))",
        "(forall z (implies (dist_le 1 x z) (not (eq z y))))",
    };
    for (const auto& text : texts) {
        const auto f = parse(text);
        const auto g = expand_distance_macros(f);
        EXPECT_EQ(g.free_variables(), f.free_variables());
        for (int trial = 0; trial < 3; ++trial) {
            const auto t = random_tree(rng, 3);
            for (const auto& u : t.positions())
                for (const auto& v : t.positions()) {
                    const Valuation val{{"x", u}, {"y", v}};
                    EXPECT_EQ(model_check(t, f, val), model_check(t, g, val)) << text;
                }
        }
    }
}

TEST(Locality, Validate) {
    EXPECT_TRUE(validate_local(local("(exists y (and (dist_le 1 x y) (label a y)))"), 1));
    EXPECT_FALSE(validate_local(local("(exists y (label a y))"), 1));
    EXPECT_TRUE(validate_local(local("(label a x)"), effective_radius(0)));
    EXPECT_FALSE(validate_local(local("(exists y (and (dist_le 2 x y) (label a y)))"), 1));
    EXPECT_FALSE(validate_local(local("(exists y (and (dist_le 1 x y) (anc x y)))"), 1));
    EXPECT_EQ(effective_radius(0), 1U);
}

TEST(Locality, Satisfiability) {
    EXPECT_TRUE(is_satisfiable_local(local("(and (root x) (label a x))"), 1, ab()));
    EXPECT_FALSE(is_satisfiable_local(local("(and (label a x) (label b x))"), 1, ab()));
    EXPECT_TRUE(is_satisfiable_local(local("(exists y (and (dist_le 1 x y) (sL x y) (label a y)))"), 1, ab()));
}

TEST(Locality, RootFormulas) {
    EXPECT_TRUE(is_root_formula(local("(and (root x) (label a x))"), 1, ab()));
    EXPECT_FALSE(is_root_formula(local("(label a x)"), 1, ab()));
    EXPECT_TRUE(is_root_formula(local("(and (label a x) (label b x))"), 1, ab()));
    // pinned to depth 1 by its parent being the root
    EXPECT_TRUE(is_root_formula(local("(exists y (and (dist_le 1 x y) (root y) (sL y x)))"), 1, ab()));
    // depth 2 needs radius 2
    const auto deep = local("(exists y (and (dist_le 2 x y) (root y) (dist_gt 1 x y)))");
    EXPECT_TRUE(is_satisfiable_local(deep, 2, ab()));
    EXPECT_TRUE(is_root_formula(deep, 2, ab()));
}

TEST(Reduction, Examples) {
    BasicLocalSentence root{1, {local("(and (root x) (label a x))")}};
    const auto r = compute_reduction(root, ab());
    EXPECT_EQ(r.op(), Op::Exists);
    EXPECT_TRUE(model_check(FiniteTree::parse(ab(), "(a (b) (b))"), r));
    EXPECT_FALSE(model_check(FiniteTree::parse(ab(), "(b (a) (a))"), r));

    BasicLocalSentence plain{1, {local("(label a x)")}};
    EXPECT_EQ(compute_reduction(plain, ab()).to_string(*ab()), parse("(exists x (root x))").to_string(*ab()));

    BasicLocalSentence unsat{1, {local("(label a x)"), local("(and (label a x) (label b x))")}};
    EXPECT_EQ(compute_reduction(unsat, ab()).op(), Op::False);

    BasicLocalSentence two_roots{1, {local("(root x)"), local("(and (root x) (label a x))")}};
    EXPECT_EQ(compute_reduction(two_roots, ab()).op(), Op::False);
}

TEST(BasicSentence, SeparatedWitnesses) {
    BasicLocalSentence s{1, {local("(label a x)"), local("(label a x)")}};
    EXPECT_FALSE(model_check_basic(FiniteTree::parse(ab(), "(a (a) (a))"), s));
    EXPECT_TRUE(model_check_basic(FiniteTree::generate(ab(), 2, [](const Position&) { return Symbol{0}; }), s));
}

TEST(GaifmanParse, Errors) {
    try {
        load_gaifman(fixture("unguarded.fol"));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.line(), 2U);
    }
    EXPECT_THROW(parse_gaifman("alphabet: a b\n(basic :r x (local (label a x)))"), InputError);
    EXPECT_THROW(parse_gaifman("alphabet: a b\n(basic :r 1 (local (sL x y)))"), InputError);
}

TEST(MeasureFo, Fixtures) {
    const std::pair<const char*, Rational> cases[] = {
        {"gaifman_root.fol", q(1, 2)},         {"gaifman_no_root.fol", Rational(1)},
        {"gaifman_unsat.fol", Rational(0)},    {"gaifman_left_child.fol", q(1, 2)},
        {"gaifman_combo.fol", q(3, 4)},        {"gaifman_two_witnesses.fol", q(1, 2)},
    };
    for (const auto& [f, v] : cases) {
        const auto in = load_gaifman(fixture(f));
        EXPECT_EQ(compute_measure_fo(in.formula, in.alphabet), v) << f;
    }
}

TEST(MeasureFo, NegationComplements) {
    for (const char* f : {"gaifman_root.fol", "gaifman_unsat.fol", "gaifman_combo.fol", "gaifman_left_child.fol"}) {
        const auto in = load_gaifman(fixture(f));
        const auto neg = GaifmanCombination::negate(in.formula);
        EXPECT_EQ(compute_measure_fo(neg, in.alphabet), Rational(1) - compute_measure_fo(in.formula, in.alphabet)) << f;
    }
}

TEST(MeasureFo, ReductionIsClopen) {
    std::mt19937_64 rng(31);
    for (const char* f : {"gaifman_root.fol", "gaifman_combo.fol", "gaifman_left_child.fol", "gaifman_two_witnesses.fol"}) {
        const auto in = load_gaifman(fixture(f));
        const auto reduced = in.formula.map<Formula>([&](const BasicLocalSentence& s) {
            return BoolCombination<Formula>::leaf(compute_reduction(s, in.alphabet));
        });
        const auto holds = [&](const FiniteTree& t) {
            return reduced.evaluate([&](const Formula& phi) { return model_check(t, phi); });
        };
        const unsigned h = measure_height(in.formula);
        for (int trial = 0; trial < 60; ++trial) {
            const auto tau = random_tree(rng, h);
            const bool base = holds(tau);
            EXPECT_EQ(holds(extend(tau, [](const Position&) { return Symbol{0}; })), base) << f;
            EXPECT_EQ(holds(extend(tau, [](const Position&) { return Symbol{1}; })), base) << f;
            EXPECT_EQ(holds(extend(tau, [&](const Position&) { return static_cast<Symbol>(rng() % 2); })), base) << f;
        }
    }
}

TEST(MeasureFo, BudgetError) {
    const auto in = load_gaifman(fixture("gaifman_root.fol"));
    FoOptions opts;
    opts.budget = 100;
    EXPECT_THROW(compute_measure_fo(in.formula, in.alphabet, opts), BudgetError);
}
