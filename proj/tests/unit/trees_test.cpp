#include "treemeasure/error.hpp"
#include "treemeasure/position.hpp"
#include "treemeasure/rational.hpp"
#include "treemeasure/tree.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace treemeasure;

namespace {

Position pos(const char* w) { return Position::parse(w); }

Position random_position(std::mt19937_64& rng, unsigned max_depth) {
    std::uniform_int_distribution<unsigned> len(0, max_depth);
    const unsigned d = len(rng);
    return Position::from_bits(d, d == 0 ? 0 : rng() & ((std::uint64_t{1} << d) - 1));
}

}  // namespace

TEST(Position, ParseAndPrint) {
    EXPECT_TRUE(pos("").is_root());
    EXPECT_TRUE(pos("e").is_root());
    EXPECT_EQ(pos("LRL").to_string(), "LRL");
    EXPECT_EQ(pos("LRL").depth(), 3U);
    EXPECT_EQ(pos("LR").left(), pos("LRL"));
    EXPECT_EQ(pos("LRL").parent(), pos("LR"));
    EXPECT_THROW(pos("LX"), InputError);
}

TEST(Position, BfsRankRoundTrip) {
    for (std::uint64_t r = 0; r < 200; ++r) EXPECT_EQ(Position::from_bfs_rank(r).bfs_rank(), r);
    EXPECT_EQ(pos("").bfs_rank(), 0U);
    EXPECT_EQ(pos("L").bfs_rank(), 1U);
    EXPECT_EQ(pos("R").bfs_rank(), 2U);
    EXPECT_EQ(pos("RL").bfs_rank(), 5U);
}

TEST(Position, PrefixOrder) {
    EXPECT_TRUE(pos("").is_prefix_of(pos("LR")));
    EXPECT_TRUE(pos("LR").is_prefix_of(pos("LR")));
    EXPECT_FALSE(pos("LR").is_strict_prefix_of(pos("LR")));
    EXPECT_FALSE(pos("R").is_prefix_of(pos("LR")));
    EXPECT_EQ(pos("LR").concat(pos("RR")), pos("LRRR"));
    EXPECT_EQ(pos("LRRR").drop(2), pos("RR"));
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance(pos(""), pos("")), 0U);
    EXPECT_EQ(distance(pos("L"), pos("R")), 2U);
    EXPECT_EQ(distance(pos("LL"), pos("LRR")), 3U);
}

TEST(Distance, MetricOnRandomTriples) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Position u = random_position(rng, 8), v = random_position(rng, 8), w = random_position(rng, 8);
        EXPECT_EQ(distance(u, v), distance(v, u));
        EXPECT_EQ(distance(u, v) == 0, u == v);
        EXPECT_LE(distance(u, w), distance(u, v) + distance(v, w));
        // the prefix relation agrees with distance along a branch
        if (u.is_prefix_of(v)) {
            EXPECT_EQ(distance(u, v), v.depth() - u.depth());
        }
    }
}

TEST(Rational, LowestTerms) {
    const Rational r(BigInt(6), BigInt(-8));
    EXPECT_EQ(r.to_string(), "-3/4");
    EXPECT_EQ(Rational::parse("10/4"), Rational(BigInt(5), BigInt(2)));
    EXPECT_EQ(Rational::parse("3").to_string(), "3");
    EXPECT_EQ(Rational::parse("1/3").to_decimal(4), "0.3333");
    EXPECT_THROW(Rational::parse("1/0"), InputError);
    EXPECT_EQ(rational_approximation(0.6666666666, 100), Rational(BigInt(2), BigInt(3)));
}

TEST(FiniteTree, ParseLiteral) {
    auto g = Alphabet::make({"a", "b", "c"});
    const auto t = FiniteTree::parse(g, "(a (b) (c (a) (b)))");
    EXPECT_EQ(t.node_count(), 5U);
    EXPECT_FALSE(t.is_full());
    EXPECT_EQ(g->name(t.label(pos("RL"))), "a");
    EXPECT_EQ(t.to_string(), "(a (b) (c (a) (b)))");
    EXPECT_THROW(FiniteTree::parse(g, "(a (d))"), InputError);
    EXPECT_THROW(FiniteTree::parse(g, "(a (b)"), InputError);
}

TEST(FiniteTree, RestrictToDepth) {
    auto g = Alphabet::make({"a", "b"});
    const auto t3 = FiniteTree::generate(g, 3, [](const Position& u) { return static_cast<Symbol>(u.depth() % 2); });
    const auto top = restrict_to_depth(t3, 1);
    EXPECT_EQ(top.node_count(), 3U);
    EXPECT_TRUE(top.is_full());
    EXPECT_EQ(top.label(pos("L")), 1);
    EXPECT_EQ(restrict_to_depth(t3, 0).node_count(), 1U);

    const auto all_a = restrict_to_depth(g, [](const Position&) { return Symbol{0}; }, 2);
    EXPECT_EQ(all_a.node_count(), 7U);
    for (const auto& u : all_a.positions()) EXPECT_EQ(all_a.label(u), 0);

    const auto chain = FiniteTree::parse(g, "(a (a (a) _) _)");
    EXPECT_THROW(restrict_to_depth(chain, 1), InputError);
}

TEST(FiniteTree, SubtreeAt) {
    auto g = Alphabet::make({"a", "b"});
    const auto t = FiniteTree::generate(g, 2, [](const Position& u) { return static_cast<Symbol>(u.bfs_rank() % 2); });
    EXPECT_EQ(subtree_at(t, pos("")), t);
    const auto left = subtree_at(t, pos("L"));
    EXPECT_EQ(left.node_count(), 3U);
    EXPECT_EQ(left.label(pos("")), t.label(pos("L")));
    EXPECT_EQ(left.label(pos("R")), t.label(pos("LR")));

    const auto chain = FiniteTree::parse(g, "(a (a (a) _) _)");
    EXPECT_THROW(subtree_at(chain, pos("R")), InputError);
}

TEST(FiniteTree, SubtreeComposition) {
    auto g = Alphabet::make({"a", "b", "c"});
    std::mt19937_64 rng(3);
    const auto t = FiniteTree::generate(g, 4, [&](const Position&) { return static_cast<Symbol>(rng() % 3); });
    for (const auto& u : t.positions())
        for (const auto& v : subtree_at(t, u).positions())
            EXPECT_EQ(subtree_at(subtree_at(t, u), v), subtree_at(t, u.concat(v)));
}

TEST(BallMeasure, Examples) {
    auto g2 = Alphabet::make({"a", "b"});
    auto g3 = Alphabet::make({"a", "b", "c"});
    EXPECT_EQ(ball_measure(FiniteTree::parse(g2, "(a)")), Rational(BigInt(1), BigInt(2)));
    EXPECT_EQ(ball_measure(FiniteTree::parse(g2, "(a (a) (b))")), Rational(BigInt(1), BigInt(8)));
    EXPECT_EQ(ball_measure(FiniteTree::parse(g3, "(c)")), Rational(BigInt(1), BigInt(3)));
}

TEST(Enumeration, Counts) {
    auto g2 = Alphabet::make({"a", "b"});
    auto g3 = Alphabet::make({"a", "b", "c"});
    EXPECT_EQ(enumerate_full_trees(g2, 0).size(), 2U);
    EXPECT_EQ(enumerate_full_trees(g2, 1).size(), 8U);
    EXPECT_EQ(enumerate_full_trees(g3, 1).size(), 27U);
    EXPECT_EQ(full_tree_count(2, 5), power(2, 63));
}

TEST(Enumeration, DistinctAndBallsSumToOne) {
    for (std::size_t k : {2, 3}) {
        auto g = Alphabet::make(k == 2 ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{"a", "b", "c"});
        const unsigned h = 2;
        std::set<std::vector<Symbol>> seen;
        Rational total;
        for (const auto& t : enumerate_full_trees(g, h)) {
            EXPECT_TRUE(seen.insert(t.dense_labels()).second);
            total += ball_measure(t);
        }
        EXPECT_EQ(total, Rational(1));
    }
}

TEST(Enumeration, LexicographicOrder) {
    auto g = Alphabet::make({"a", "b"});
    FullTreeEnumerator e(g, 1);
    std::vector<Symbol> prev, cur;
    for (std::uint64_t i = 0; i < e.count(); ++i) {
        e.labels_at(i, cur);
        if (i > 0) {
            EXPECT_LT(prev, cur);
        }
        prev = cur;
    }
    EXPECT_EQ(e.tree_at(1).to_string(), "(a (a) (b))");
}

TEST(Enumeration, BudgetNamesCount) {
    auto g = Alphabet::make({"a", "b"});
    try {
        FullTreeEnumerator e(g, 4, 1000);
        FAIL() << "expected a budget error";
    } catch (const BudgetError& err) {
        EXPECT_EQ(err.required(), "2147483648");
        EXPECT_NE(std::string(err.what()).find("2147483648"), std::string::npos);
    }
}
