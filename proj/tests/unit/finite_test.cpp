#include "oracles.hpp"

#include "treemeasure/error.hpp"
#include "treemeasure/finite/finite_automaton.hpp"
#include "treemeasure/safety/fixpoint.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace treemeasure;
using namespace treemeasure::finite;

namespace {

std::string fixture(const std::string& name) { return std::string(TM_FIXTURE_DIR) + "/" + name; }

Rational q(long p, long d) { return Rational(BigInt(p), BigInt(d)); }

const AlphabetPtr& ab() {
    static const AlphabetPtr g = Alphabet::make({"a", "b"});
    return g;
}

/// Random full-branching tree: each node below `max_height` splits with probability 1/2.
FiniteTree random_full_branching(std::mt19937_64& rng, unsigned max_height) {
    std::map<Position, Symbol> labels;
    std::vector<Position> todo{Position::root()};
    while (!todo.empty()) {
        const Position u = todo.back();
        todo.pop_back();
        labels[u] = static_cast<Symbol>(rng() % 2);
        if (u.depth() < max_height && rng() % 2) {
            todo.push_back(u.left());
            todo.push_back(u.right());
        }
    }
    return FiniteTree::sparse(ab(), labels);
}

}  // namespace

TEST(FiniteAutomaton, ParseAndRun) {
    const auto a = load_finite_automaton(fixture("three_node.fta"));
    EXPECT_TRUE(a.accepts(FiniteTree::parse(ab(), "(a (b) (b))")));
    EXPECT_FALSE(a.accepts(FiniteTree::parse(ab(), "(a (b) (a))")));
    EXPECT_FALSE(a.accepts(FiniteTree::parse(ab(), "(a)")));
    const auto u = load_finite_automaton(fixture("unary.fta"));
    EXPECT_TRUE(u.accepts(FiniteTree::parse(ab(), "(a (b) _)")));
    EXPECT_THROW(parse_finite_automaton("alphabet: a\nstates: q\naccept: q\nleaf: q z\n"), InputError);
    EXPECT_TRUE(FiniteTreeAutomaton::singleton(FiniteTree::parse(ab(), "(b (a) (b))"))
                    .accepts(FiniteTree::parse(ab(), "(b (a) (b))")));
}

TEST(ExtendedAlphabet, Flats) {
    const auto one = extend_alphabet(Alphabet::make({"a"}));
    EXPECT_EQ(one.extended->size(), 2U);
    const auto two = extend_alphabet(ab());
    EXPECT_EQ(two.extended->size(), 4U);
    std::set<Symbol> flats;
    for (Symbol a = 0; a < 2; ++a) {
        EXPECT_TRUE(two.is_flat(two.flat(a)));
        EXPECT_FALSE(two.is_flat(a));
        EXPECT_EQ(two.unflat(two.flat(a)), a);
        flats.insert(two.flat(a));
    }
    EXPECT_EQ(flats.size(), 2U);
}

TEST(Project, Examples) {
    const auto s = extend_alphabet(ab());
    const auto& g = s.extended;
    const auto flat_a = FiniteTree::generate(g, 1, [&](const Position& u) { return u.is_root() ? s.flat(0) : Symbol{1}; });
    auto p = project(flat_a, s);
    ASSERT_EQ(p.status, Projection::Status::Complete);
    EXPECT_EQ(p.tree->to_string(), "(a)");

    const auto split = FiniteTree::generate(g, 2, [&](const Position& u) { return u.depth() == 0 ? Symbol{0} : s.flat(1); });
    p = project(split, s);
    ASSERT_EQ(p.status, Projection::Status::Complete);
    EXPECT_EQ(p.tree->to_string(), "(a (b) (b))");

    const auto open = FiniteTree::generate(g, 1, [](const Position&) { return Symbol{0}; });
    EXPECT_EQ(project(open, s).status, Projection::Status::Truncated);
}

TEST(Project, ImagesAreFullBranching) {
    const auto s = extend_alphabet(ab());
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const auto t = FiniteTree::generate(s.extended, 4, [&](const Position&) { return static_cast<Symbol>(rng() % 4); });
        const auto p = project(t, s);
        if (p.status != Projection::Status::Complete) continue;
        for (const auto& u : p.tree->positions())
            EXPECT_EQ(p.tree->contains(u.left()), p.tree->contains(u.right()));
    }
}

TEST(Project, EmbedIsRightInverse) {
    const auto s = extend_alphabet(ab());
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto tau = random_full_branching(rng, 3);
        const auto p = project(embed(tau, s), s);
        ASSERT_EQ(p.status, Projection::Status::Complete);
        EXPECT_EQ(*p.tree, tau);
    }
    EXPECT_THROW(embed(FiniteTree::parse(ab(), "(a (b) _)"), s), InputError);
}

TEST(Lift, Fixtures) {
    EXPECT_EQ(*measure_finite_language(load_finite_automaton(fixture("leaf_a.fta"))).exact, q(1, 4));
    EXPECT_EQ(*measure_finite_language(load_finite_automaton(fixture("empty.fta"))).exact, Rational(0));
    EXPECT_EQ(*measure_finite_language(load_finite_automaton(fixture("unary.fta"))).exact, Rational(0));
    EXPECT_EQ(*measure_finite_language(load_finite_automaton(fixture("three_node.fta"))).exact, q(1, 64));
    safety::IterationOptions opts;
    opts.max_iters = 10000;
    EXPECT_GE(measure_finite_language(load_finite_automaton(fixture("all_finite.fta")), opts).value, 1 - 1e-3);
}

TEST(Lift, SingletonMatchesClosedForm) {
    const auto s = extend_alphabet(ab());
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const auto tau = random_full_branching(rng, 2);
        const auto lifted = lift_automaton(FiniteTreeAutomaton::singleton(tau), s);
        // (2n)^-|dom tau| with n = 2
        mpq_class closed(1);
        for (std::size_t i = 0; i < tau.node_count(); ++i) closed /= 4;
        EXPECT_EQ(finite_tree_probability(tau), Rational(closed));
        for (unsigned d = tau.height() + 1; d <= tau.height() + 2; ++d)
            EXPECT_EQ(safety::exact_depth_measure(lifted, d), Rational(closed)) << tau.to_string() << " d=" << d;
    }
}

TEST(Lift, SingletonMatchesProjectionCount) {
    // fraction of Γ′ trees of height 2 whose projection is tau
    const auto s = extend_alphabet(ab());
    for (const char* lit : {"(a)", "(b)", "(a (b) (a))"}) {
        const auto tau = FiniteTree::parse(ab(), lit);
        const mpq_class expected = oracle::fraction(4, 2, [&](const oracle::Tree& t) {
            std::vector<Symbol> labels(t.labels.begin(), t.labels.end());
            const auto p = project(FiniteTree::full(s.extended, 2, labels), s);
            return p.status == Projection::Status::Complete && *p.tree == tau;
        });
        EXPECT_EQ(finite_tree_probability(tau), Rational(expected)) << lit;
    }
}

TEST(Lift, SizeIsLinear) {
    for (const char* f : {"leaf_a.fta", "all_finite.fta", "three_node.fta", "unary.fta", "empty.fta"}) {
        const auto a = load_finite_automaton(fixture(f));
        const auto lifted = lift_automaton(a, LiftOptions{true, false});
        EXPECT_LE(lifted.state_count(), a.state_count() + 2) << f;
        const std::size_t rules = a.internal().size() + a.leaves().size();
        EXPECT_LE(lifted.transitions().size(), 4 * rules + 4 * 4) << f;
    }
}

TEST(Lift, NonFullBranchingDetected) {
    EXPECT_TRUE(accepts_non_full_branching(load_finite_automaton(fixture("unary.fta"))));
    EXPECT_FALSE(accepts_non_full_branching(load_finite_automaton(fixture("three_node.fta"))));
}
