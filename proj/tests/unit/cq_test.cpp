#include "oracles.hpp"

#include "treemeasure/cq/compile.hpp"
#include "treemeasure/cq/firm.hpp"
#include "treemeasure/cq/homomorphism.hpp"
#include "treemeasure/cq/measure.hpp"
#include "treemeasure/cq/pattern.hpp"
#include "treemeasure/error.hpp"
#include "treemeasure/safety/fixpoint.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace treemeasure;
using namespace treemeasure::cq;

namespace {

std::string fixture(const std::string& name) { return std::string(TM_FIXTURE_DIR) + "/" + name; }

Rational q(long p, long d) { return Rational(BigInt(p), BigInt(d)); }

Pattern pat(const std::string& body, const std::string& alphabet = "a b") {
    return parse_pattern("alphabet: " + alphabet + "\n" + body);
}

oracle::Tree to_oracle(const FiniteTree& t) {
    oracle::Tree o{t.height(), {}};
    for (auto s : t.dense_labels()) o.labels.push_back(s);
    return o;
}

Pattern random_pattern(std::mt19937_64& rng, const AlphabetPtr& g, std::size_t max_vertices, bool allow_root) {
    std::uniform_int_distribution<std::size_t> nv(1, max_vertices);
    const std::size_t n = nv(rng);
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < n; ++i) {
        Vertex v{"v" + std::to_string(i), {}, allow_root && rng() % 4 == 0};
        if (rng() % 2) v.labels.push_back(static_cast<Symbol>(rng() % g->size()));
        vs.push_back(v);
    }
    std::vector<Edge> es;
    const std::size_t ne = rng() % (n + 1);
    for (std::size_t i = 0; i < ne; ++i)
        es.push_back({static_cast<std::size_t>(rng() % n), static_cast<EdgeKind>(rng() % 4),
                      static_cast<std::size_t>(rng() % n)});
    return Pattern(g, vs, es);
}

/// Placement exists inside the first `height` levels: maps over node indices,
/// nodes shared only by vertices with compatible labels.
bool placement_oracle(const Pattern& p, unsigned height) {
    const std::size_t nodes = oracle::node_count(height), k = p.vertex_count();
    std::vector<std::size_t> h(k, 0);
    while (true) {
        bool ok = true;
        for (std::size_t v = 0; v < k && ok; ++v) {
            if (p.vertices()[v].root && h[v] != 0) ok = false;
            std::set<Symbol> labels(p.vertices()[v].labels.begin(), p.vertices()[v].labels.end());
            for (std::size_t w = 0; w < k; ++w)
                if (h[w] == h[v]) labels.insert(p.vertices()[w].labels.begin(), p.vertices()[w].labels.end());
            if (labels.size() > 1) ok = false;
        }
        for (const auto& e : p.edges())
            if (ok && !oracle::edge_ok(e.kind, h[e.source], h[e.target])) ok = false;
        if (ok) return true;
        std::size_t i = 0;
        while (i < k && ++h[i] == nodes) h[i++] = 0;
        if (i == k) return false;
    }
}

/// Reachability closure; two vertices share a firm component iff they reach each other.
std::vector<std::vector<bool>> closure(const Digraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v) {
        r[v][v] = true;
        for (auto w : g[v]) r[v][w] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = true;
    return r;
}

bool has_edge(const Digraph& g, std::size_t x, std::size_t y) {
    return std::find(g[x].begin(), g[x].end(), y) != g[x].end();
}

}  // namespace

TEST(PatternParse, Fixtures) {
    const auto p = load_pattern(fixture("grandchild.pat"));
    EXPECT_EQ(p.vertex_count(), 3U);
    EXPECT_EQ(p.edges().size(), 3U);
    EXPECT_EQ(p.size(), 6U);
    EXPECT_TRUE(p.has_root_mark());
    const auto again = parse_pattern(p.to_text());
    EXPECT_EQ(again.edges(), p.edges());
    EXPECT_TRUE(load_pattern(fixture("conflict.pat")).has_label_conflict());
    try {
        load_pattern(fixture("bad_syntax.pat"));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.line(), 3U);
    }
}

TEST(Homomorphism, Examples) {
    const auto g = Alphabet::make({"a", "b"});
    const auto p = load_pattern(fixture("root_a.pat"));
    const auto h = check_homomorphism(FiniteTree::parse(g, "(a (b) (b))"), p);
    ASSERT_TRUE(h.has_value());
    EXPECT_TRUE((*h)[0].is_root());
    EXPECT_FALSE(check_homomorphism(FiniteTree::parse(g, "(b (a) (a))"), p).has_value());

    const auto d = pat("vertex: x label=a\nvertex: y label=b\nedge: x D y\n", "a b c");
    const auto g3 = d.alphabet();
    const auto t = FiniteTree::generate(g3, 2, [](const Position& u) {
        if (u.is_root()) return Symbol{0};
        return u == Position::parse("LL") ? Symbol{1} : Symbol{2};
    });
    const auto hd = check_homomorphism(t, d);
    ASSERT_TRUE(hd.has_value());
    EXPECT_TRUE(is_homomorphism(t, d, *hd));
}

TEST(Homomorphism, AgreesWithExhaustiveSearch) {
    std::mt19937_64 rng(99);
    const auto g = Alphabet::make({"a", "b"});
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_pattern(rng, g, 3, true);
        const auto t = FiniteTree::generate(g, 3, [&](const Position&) { return static_cast<Symbol>(rng() % 2); });
        const auto fast = check_homomorphism(t, p);
        const bool slow = exhaustive_homomorphism(t, p).has_value();
        EXPECT_EQ(fast.has_value(), slow) << p.to_text() << t.to_string();
        EXPECT_EQ(oracle::satisfies(to_oracle(t), p), slow);
        if (fast) {
            EXPECT_TRUE(is_homomorphism(t, p, *fast));
        }
    }
}

TEST(Homomorphism, SearchOrderPutsRootsFirst) {
    const auto p = pat("vertex: y\nvertex: x root\nedge: x L y\n");
    EXPECT_EQ(search_order(p), (std::vector<std::size_t>{1, 0}));
}

TEST(Firm, ConnectionsGraph) {
    const auto s = pat("vertex: x\nvertex: y\nedge: x S y\n");
    auto c = connections_graph(s);
    EXPECT_TRUE(has_edge(c, 0, 1));
    EXPECT_TRUE(has_edge(c, 1, 0));

    const auto d = pat("vertex: x\nvertex: y\nedge: x D y\n");
    c = connections_graph(d);
    EXPECT_TRUE(has_edge(c, 0, 1));
    EXPECT_FALSE(has_edge(c, 1, 0));

    const auto r = pat("vertex: x root\n");
    c = connections_graph(r);
    EXPECT_TRUE(has_edge(c, 0, 0));
}

TEST(Firm, Decomposition) {
    EXPECT_EQ(firm_components(pat("vertex: x\nvertex: y\nedge: x S y\n")).size(), 1U);
    EXPECT_EQ(firm_components(pat("vertex: x\nvertex: y\nedge: x D y\n")).size(), 2U);
    const auto p = pat("vertex: x\nvertex: y\nvertex: z\nvertex: w\nedge: x S y\nedge: y D z\nedge: z S w\n");
    const auto comps = firm_components(p);
    ASSERT_EQ(comps.size(), 2U);
    EXPECT_EQ(comps[0], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(comps[1], (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(firm_decomposition(p)[1].vertices()[0].name, "z");
}

TEST(Firm, RootSubpattern) {
    const auto p = pat("vertex: x root\nvertex: y\nvertex: z\nedge: x S y\nedge: y D z\n");
    const auto r = root_subpattern(p);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->vertex_count(), 2U);
    EXPECT_FALSE(root_subpattern(pat("vertex: x\n")).has_value());
    const auto split = root_subpattern(load_pattern(fixture("split_roots.pat")));
    ASSERT_TRUE(split.has_value());
    EXPECT_EQ(split->vertex_count(), 3U);
}

TEST(Firm, ComponentsAreMutualReachability) {
    std::mt19937_64 rng(17);
    const auto g = Alphabet::make({"a", "b"});
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_pattern(rng, g, 5, true);
        const auto reach = closure(connections_graph(p));
        std::vector<int> comp(p.vertex_count(), -1);
        const auto comps = firm_components(p);
        for (std::size_t c = 0; c < comps.size(); ++c)
            for (auto v : comps[c]) comp[v] = static_cast<int>(c);
        for (std::size_t i = 0; i < p.vertex_count(); ++i)
            for (std::size_t j = 0; j < p.vertex_count(); ++j)
                EXPECT_EQ(comp[i] == comp[j], reach[i][j] && reach[j][i]);
        // root-marked vertices always share a component
        std::set<int> root_comps;
        for (std::size_t v = 0; v < p.vertex_count(); ++v)
            if (p.vertices()[v].root) root_comps.insert(comp[v]);
        EXPECT_LE(root_comps.size(), 1U);
    }
}

TEST(Satisfiability, Examples) {
    EXPECT_FALSE(is_satisfiable(load_pattern(fixture("conflict.pat"))));
    EXPECT_FALSE(is_satisfiable(load_pattern(fixture("unsat.pat"))));
    const auto p = pat("vertex: x label=a root\nvertex: y label=b\nedge: x D y\n");
    EXPECT_TRUE(is_satisfiable(p));
    const auto t = satisfying_tree(p);
    ASSERT_TRUE(t.has_value());
    EXPECT_TRUE(satisfies(*t, p));
}

TEST(Satisfiability, AgreesWithPlacementOracle) {
    std::mt19937_64 rng(4242);
    const auto g = Alphabet::make({"a", "b"});
    for (int trial = 0; trial < 400; ++trial) {
        const auto p = random_pattern(rng, g, 3, true);
        const bool sat = is_satisfiable(p);
        EXPECT_EQ(sat, placement_oracle(p, 4)) << p.to_text();
        if (sat) {
            const auto t = satisfying_tree(p);
            ASSERT_TRUE(t.has_value());
            EXPECT_TRUE(satisfies(*t, p)) << p.to_text();
        }
    }
}

TEST(MeasureCq, Fixtures) {
    EXPECT_EQ(measure_cq(load_pattern(fixture("unrooted_a.pat"))), Rational(1));
    EXPECT_EQ(measure_cq(load_pattern(fixture("root_a.pat"))), q(1, 2));
    EXPECT_EQ(measure_cq(load_pattern(fixture("unsat.pat"))), Rational(0));
    EXPECT_EQ(measure_cq(load_pattern(fixture("conflict.pat"))), Rational(0));
    EXPECT_EQ(measure_cq(load_pattern(fixture("root_chain.pat"))), q(1, 4));
    EXPECT_EQ(measure_cq(load_pattern(fixture("root_desc.pat"))), q(1, 2));
    EXPECT_EQ(measure_cq(load_pattern(fixture("root_children.pat"))), q(2, 9));
    EXPECT_EQ(measure_cq(load_pattern(fixture("split_roots.pat"))), q(1, 4));
    EXPECT_EQ(measure_cq(load_pattern(fixture("grandchild.pat"))), q(15, 32));
}

TEST(MeasureCq, StrategiesAgree) {
    for (const char* f : {"root_a.pat", "root_chain.pat", "split_roots.pat", "root_desc.pat"}) {
        const auto p = load_pattern(fixture(f));
        CqOptions enumerate, compile;
        enumerate.strategy = CountStrategy::Enumerate;
        compile.strategy = CountStrategy::Compile;
        EXPECT_EQ(measure_cq(p, enumerate), measure_cq(p, compile)) << f;
    }
}

TEST(MeasureCq, EnumerationOracle) {
    // Images of these root patterns lie at depth <= vertices - 1, so any height
    // covering that depth decides them.
    const std::pair<const char*, unsigned> cases[] = {
        {"root_a.pat", 1}, {"root_chain.pat", 2}, {"root_children.pat", 2}, {"split_roots.pat", 2}, {"grandchild.pat", 3}};
    for (const auto& [f, height] : cases) {
        const auto p = load_pattern(fixture(f));
        EXPECT_EQ(measure_cq(p), Rational(oracle::pattern_fraction(p, height))) << f;
    }
}

TEST(MeasureCq, EnumerateBudget) {
    CqOptions opts;
    opts.strategy = CountStrategy::Enumerate;
    opts.budget = 100;
    EXPECT_THROW(measure_cq(load_pattern(fixture("root_children.pat")), opts), BudgetError);
}

TEST(MeasureBccq, Fixtures) {
    const auto neg = load_bccq(fixture("not_root_a.bccq"));
    EXPECT_EQ(measure_bccq(neg.formula, neg.alphabet), q(1, 2));
    const auto mixed = load_bccq(fixture("mixed.bccq"));
    EXPECT_EQ(measure_bccq(mixed.formula, mixed.alphabet), q(1, 2));
    const auto uni = load_bccq(fixture("union.bccq"));
    EXPECT_EQ(measure_bccq(uni.formula, uni.alphabet), q(3, 4));
    EXPECT_EQ(measure_bccq(BccqFormula::constant(false), uni.alphabet), Rational(0));
    EXPECT_EQ(measure_bccq(BccqFormula::constant(true), uni.alphabet), Rational(1));
}

TEST(MeasureBccq, StrategiesAgree) {
    const auto uni = load_bccq(fixture("union.bccq"));
    CqOptions compile;
    compile.strategy = CountStrategy::Compile;
    EXPECT_EQ(measure_bccq(uni.formula, uni.alphabet, compile), q(3, 4));
}

TEST(Compile, Examples) {
    const auto a = compile_pattern_to_safety(load_pattern(fixture("root_a.pat")));
    EXPECT_EQ(safety::exact_depth_measure(a, 1), q(1, 2));
    const auto chain = compile_pattern_to_safety(load_pattern(fixture("root_chain.pat")));
    EXPECT_EQ(safety::exact_depth_measure(chain, 2), q(1, 4));
    const auto gc = load_pattern(fixture("grandchild.pat"));
    EXPECT_EQ(safety::exact_depth_measure(compile_pattern_to_safety(gc), static_cast<unsigned>(gc.size())),
              Rational(oracle::pattern_fraction(gc, 3)));
}

TEST(Compile, RejectsUnsupported) {
    EXPECT_THROW(compile_pattern_to_safety(load_pattern(fixture("unrooted_a.pat"))), InputError);
    EXPECT_THROW(compile_pattern_to_safety(load_pattern(fixture("root_desc.pat"))), InputError);
    std::string big = "vertex: v0 root\n";
    for (int i = 1; i <= 10; ++i)
        big += "vertex: v" + std::to_string(i) + "\nedge: v" + std::to_string(i - 1) + " S v" + std::to_string(i) + "\n";
    EXPECT_THROW(compile_pattern_to_safety(pat(big)), ResourceError);
}

TEST(Compile, StableBeyondDecisionDepth) {
    const auto p = load_pattern(fixture("root_children.pat"));
    const auto a = compile_pattern_to_safety(p);
    const auto base = safety::exact_depth_measure(a, static_cast<unsigned>(p.size()));
    for (unsigned d = static_cast<unsigned>(p.size()) + 1; d <= p.size() + 3; ++d)
        EXPECT_EQ(safety::exact_depth_measure(a, d), base);
}
