#include "treemeasure/cq/compile.hpp"
#include "treemeasure/cq/homomorphism.hpp"
#include "treemeasure/cq/measure.hpp"
#include "treemeasure/finite/finite_automaton.hpp"
#include "treemeasure/fo/gaifman.hpp"
#include "treemeasure/safety/distribution.hpp"
#include "treemeasure/safety/fixpoint.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace treemeasure;

namespace {

std::string fixture(const std::string& name) { return std::string(TM_FIXTURE_DIR) + "/" + name; }

}  // namespace

static void BM_Enumerate(benchmark::State& state) {
    const auto g = Alphabet::make({"a", "b"});
    const FullTreeEnumerator trees(g, static_cast<unsigned>(state.range(0)));
    std::vector<Symbol> labels;
    for (auto _ : state) {
        std::uint64_t sum = 0;
        for (std::uint64_t i = 0; i < trees.count(); ++i) {
            trees.labels_at(i, labels);
            sum += labels.back();
        }
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trees.count()));
}
BENCHMARK(BM_Enumerate)->Arg(2)->Arg(3);

static void BM_ApplyF(benchmark::State& state) {
    const auto a = safety::load_automaton(fixture("even_first_b.aut")).automaton;
    auto alpha = safety::to_float(safety::exact_type_distribution(a, 4));
    for (auto _ : state) benchmark::DoNotOptimize(safety::apply_F(a, alpha));
}
BENCHMARK(BM_ApplyF);

static void BM_ExactDepthMeasure(benchmark::State& state) {
    const auto a = safety::load_automaton(fixture("lab.aut")).automaton;
    const auto d = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(safety::exact_depth_measure(a, d));
}
BENCHMARK(BM_ExactDepthMeasure)->Arg(8)->Arg(14)->Arg(18);

static void BM_BruteForceDepthMeasure(benchmark::State& state) {
    const auto a = safety::load_automaton(fixture("swap.aut")).automaton;
    for (auto _ : state) benchmark::DoNotOptimize(safety::brute_force_depth_measure(a, 3));
}
BENCHMARK(BM_BruteForceDepthMeasure);

static void BM_Iterate(benchmark::State& state, const char* file) {
    const auto a = safety::load_automaton(fixture(file)).automaton;
    for (auto _ : state) benchmark::DoNotOptimize(safety::iterate_measure(a));
}
BENCHMARK_CAPTURE(BM_Iterate, lab, "lab.aut");
BENCHMARK_CAPTURE(BM_Iterate, even_first_b, "even_first_b.aut");

static void BM_IterateLa2(benchmark::State& state) {
    const auto a = safety::load_automaton(fixture("la2.aut")).automaton;
    safety::IterationOptions opts;
    opts.mode = safety::NumericMode::Float;
    opts.max_iters = 2000;
    opts.tolerance = 1e-15;
    for (auto _ : state) benchmark::DoNotOptimize(safety::iterate_measure(a, opts));
}
BENCHMARK(BM_IterateLa2);

static void BM_Homomorphism(benchmark::State& state) {
    const auto p = cq::load_pattern(fixture("grandchild.pat"));
    std::mt19937_64 rng(1);
    std::vector<FiniteTree> trees;
    for (int i = 0; i < 64; ++i)
        trees.push_back(FiniteTree::generate(p.alphabet(), 6, [&](const Position&) { return static_cast<Symbol>(rng() % 2); }));
    for (auto _ : state)
        for (const auto& t : trees) benchmark::DoNotOptimize(cq::satisfies(t, p));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trees.size()));
}
BENCHMARK(BM_Homomorphism);

static void BM_MeasureCq(benchmark::State& state, const char* file, cq::CountStrategy strategy) {
    const auto p = cq::load_pattern(fixture(file));
    cq::CqOptions opts;
    opts.strategy = strategy;
    for (auto _ : state) benchmark::DoNotOptimize(cq::measure_cq(p, opts));
}
BENCHMARK_CAPTURE(BM_MeasureCq, split_roots_enumerate, "split_roots.pat", cq::CountStrategy::Enumerate);
BENCHMARK_CAPTURE(BM_MeasureCq, split_roots_compile, "split_roots.pat", cq::CountStrategy::Compile);
BENCHMARK_CAPTURE(BM_MeasureCq, grandchild_compile, "grandchild.pat", cq::CountStrategy::Compile);

static void BM_CompilePattern(benchmark::State& state) {
    const auto p = cq::load_pattern(fixture("root_children.pat"));
    for (auto _ : state) benchmark::DoNotOptimize(cq::compile_pattern_to_safety(p));
}
BENCHMARK(BM_CompilePattern);

static void BM_MeasureFo(benchmark::State& state, const char* file) {
    const auto in = fo::load_gaifman(fixture(file));
    for (auto _ : state) benchmark::DoNotOptimize(fo::compute_measure_fo(in.formula, in.alphabet));
}
BENCHMARK_CAPTURE(BM_MeasureFo, combo, "gaifman_combo.fol");
BENCHMARK_CAPTURE(BM_MeasureFo, two_witnesses, "gaifman_two_witnesses.fol");

static void BM_FiniteMeasure(benchmark::State& state) {
    const auto a = finite::load_finite_automaton(fixture("three_node.fta"));
    for (auto _ : state) benchmark::DoNotOptimize(finite::measure_finite_language(a));
}
BENCHMARK(BM_FiniteMeasure);
BENCHMARK_MAIN();
