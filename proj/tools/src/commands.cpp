#include "treemeasure/cli/commands.hpp"

#include "treemeasure/cq/firm.hpp"
#include "treemeasure/cq/measure.hpp"
#include "treemeasure/error.hpp"
#include "treemeasure/finite/finite_automaton.hpp"
#include "treemeasure/fo/gaifman.hpp"
#include "treemeasure/fo/model_check.hpp"
#include "treemeasure/safety/automaton.hpp"
#include "treemeasure/safety/certificate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace treemeasure::cli {

Kind parse_kind(const std::string& s) {
    if (s == "automaton") return Kind::Automaton;
    if (s == "cq") return Kind::Cq;
    if (s == "bccq") return Kind::Bccq;
    if (s == "fo") return Kind::Fo;
    if (s == "finite") return Kind::Finite;
    throw InputError("unknown input kind '" + s + "' (automaton, cq, bccq, fo, finite)");
}

std::string to_string(Kind k) {
    switch (k) {
        case Kind::Automaton: return "automaton";
        case Kind::Cq: return "cq";
        case Kind::Bccq: return "bccq";
        case Kind::Fo: return "fo";
        case Kind::Finite: return "finite";
    }
    return "?";
}

namespace {

MeasureResult from_exact(const Rational& r) {
    MeasureResult out;
    out.exact = r;
    out.value = r.to_double();
    out.status = "exact";
    return out;
}

MeasureResult from_estimate(const safety::MeasureEstimate& e) {
    MeasureResult out;
    if (e.status == safety::IterationStatus::ExactStabilized) out.exact = e.exact;
    out.value = e.value;
    out.status = safety::to_string(e.status);
    out.iterations = e.iterations;
    out.last_delta = e.last_delta;
    out.trace = e.trace;
    return out;
}

safety::IterationOptions iteration_options(const RunConfig& c) {
    safety::IterationOptions o;
    o.tolerance = c.tolerance;
    o.max_iters = c.max_iters;
    o.mode = c.mode;
    return o;
}

cq::CqOptions cq_options(const RunConfig& c) {
    cq::CqOptions o;
    o.budget = c.budget;
    o.threads = c.threads;
    return o;
}

fo::FoOptions fo_options(const RunConfig& c) {
    fo::FoOptions o;
    o.budget = c.budget;
    o.threads = c.threads;
    return o;
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string general(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// Fraction of height-h full trees satisfying a predicate.
Rational enumerate_fraction(const AlphabetPtr& alphabet, unsigned height, std::uint64_t budget,
                            const std::function<bool(const FiniteTree&)>& accept) {
    const FullTreeEnumerator trees(alphabet, height, budget);
    std::uint64_t hits = 0;
    trees.for_each([&](const FiniteTree& t) {
        if (accept(t)) ++hits;
    });
    return Rational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(trees.count())));
}

// Exhaustive search when it is small, backtracking otherwise.
bool oracle_satisfies(const FiniteTree& t, const cq::Pattern& p) {
    double maps = 1;
    for (std::size_t i = 0; i < p.vertex_count(); ++i) maps *= static_cast<double>(t.node_count());
    return maps <= 4096 ? cq::exhaustive_homomorphism(t, p).has_value() : cq::satisfies(t, p);
}

// Leaf verdicts for the oracle: unsatisfiable, no root pattern, or the root pattern.
struct OracleLeaf {
    cq::ReducedLeaf leaf;
    bool check(const FiniteTree& t) const {
        switch (leaf.kind) {
            case cq::ReducedLeaf::Kind::False: return false;
            case cq::ReducedLeaf::Kind::True: return true;
            case cq::ReducedLeaf::Kind::Rooted: return oracle_satisfies(t, *leaf.pattern);
        }
        return false;
    }
    unsigned height() const {
        return leaf.kind == cq::ReducedLeaf::Kind::Rooted ? cq::decision_height(*leaf.pattern) : 0;
    }
};

OracleReport automaton_oracle(const safety::SafetyAutomaton& a, const std::vector<std::pair<unsigned, Rational>>& expect,
                              unsigned d, const RunConfig& config) {
    OracleReport r;
    r.depth = d;
    r.engine = safety::exact_depth_measure(a, d);
    r.oracle = safety::brute_force_depth_measure(a, d, config.budget).measure;
    for (const auto& [depth, value] : expect)
        if (depth == d) r.expected = value;
    r.equal = r.engine == r.oracle && (!r.expected || *r.expected == r.engine);
    return r;
}

}  // namespace

MeasureResult compute_measure(Kind kind, const std::string& path, const RunConfig& config) {
    switch (kind) {
        case Kind::Automaton: {
            const auto file = safety::load_automaton(path);
            return from_estimate(safety::iterate_measure(file.automaton, iteration_options(config)));
        }
        case Kind::Finite: {
            const auto a = finite::load_finite_automaton(path);
            auto result = from_estimate(finite::measure_finite_language(a, iteration_options(config)));
            if (finite::accepts_non_full_branching(a))
                result.warnings.push_back("the automaton accepts trees with a unary node; they carry no measure");
            return result;
        }
        case Kind::Cq: {
            const auto p = cq::load_pattern(path);
            return from_exact(cq::measure_cq(p, cq_options(config)));
        }
        case Kind::Bccq: {
            const auto in = cq::load_bccq(path);
            return from_exact(cq::measure_bccq(in.formula, in.alphabet, cq_options(config)));
        }
        case Kind::Fo: {
            const auto in = fo::load_gaifman(path);
            return from_exact(fo::compute_measure_fo(in.formula, in.alphabet, fo_options(config)));
        }
    }
    throw InputError("unknown input kind");
}

std::string render(const MeasureResult& r, Format format, int digits) {
    switch (format) {
        case Format::Rational:
            if (r.exact) return r.exact->to_string();
            return "value=" + fixed(r.value, digits) + " status=" + r.status +
                   " iterations=" + std::to_string(r.iterations) + " last_delta=" + general(r.last_delta);
        case Format::Decimal: {
            std::string s = "value=" + fixed(r.value, digits) + " status=" + r.status;
            if (!r.exact) s += " iterations=" + std::to_string(r.iterations) + " last_delta=" + general(r.last_delta);
            return s;
        }
        case Format::Json: {
            nlohmann::json j;
            j["value"] = r.value;
            j["exact"] = r.exact ? nlohmann::json(r.exact->to_string()) : nlohmann::json(nullptr);
            j["status"] = r.status;
            j["iterations"] = r.iterations;
            j["last_delta"] = r.last_delta;
            j["trace"] = r.trace;
            return j.dump();
        }
    }
    return {};
}

OracleReport run_oracle(Kind kind, const std::string& path, std::optional<unsigned> depth, const RunConfig& config) {
    switch (kind) {
        case Kind::Automaton: {
            const auto file = safety::load_automaton(path);
            unsigned d = depth.value_or(3);
            if (!depth && !file.expectations.empty()) d = file.expectations.front().first;
            return automaton_oracle(file.automaton, file.expectations, d, config);
        }
        case Kind::Finite: {
            const auto a = finite::load_finite_automaton(path);
            return automaton_oracle(finite::lift_automaton(a), {}, depth.value_or(3), config);
        }
        case Kind::Cq: {
            const auto p = cq::load_pattern(path);
            const OracleLeaf leaf{cq::reduce_query(p)};
            OracleReport r;
            r.depth = depth.value_or(leaf.height());
            r.engine = cq::measure_cq(p, cq_options(config));
            r.oracle = enumerate_fraction(p.alphabet(), r.depth, config.budget,
                                          [&](const FiniteTree& t) { return leaf.check(t); });
            r.equal = r.engine == r.oracle;
            return r;
        }
        case Kind::Bccq: {
            const auto in = cq::load_bccq(path);
            std::vector<OracleLeaf> leaves;
            const auto reduced = in.formula.map<std::size_t>([&](const cq::Pattern& q) {
                leaves.push_back({cq::reduce_query(q)});
                return BoolCombination<std::size_t>::leaf(leaves.size() - 1);
            });
            unsigned h = 0;
            for (const auto& l : leaves) h = std::max(h, l.height());
            OracleReport r;
            r.depth = depth.value_or(h);
            r.engine = cq::measure_bccq(in.formula, in.alphabet, cq_options(config));
            r.oracle = enumerate_fraction(in.alphabet, r.depth, config.budget, [&](const FiniteTree& t) {
                return reduced.evaluate([&](std::size_t i) { return leaves[i].check(t); });
            });
            r.equal = r.engine == r.oracle;
            return r;
        }
        case Kind::Fo: {
            // Reductions re-checked with distance atoms expanded over the child relation.
            const auto in = fo::load_gaifman(path);
            fo::LocalAnalyzer analyzer(in.alphabet, fo_options(config));
            std::vector<fo::Formula> reductions;
            const auto reduced = in.formula.map<std::size_t>([&](const fo::BasicLocalSentence& s) {
                reductions.push_back(fo::expand_distance_macros(analyzer.reduction(s)));
                return BoolCombination<std::size_t>::leaf(reductions.size() - 1);
            });
            OracleReport r;
            r.depth = depth.value_or(fo::measure_height(in.formula));
            r.engine = fo::compute_measure_fo(in.formula, in.alphabet, fo_options(config));
            std::vector<fo::ModelChecker> checkers(reductions.begin(), reductions.end());
            r.oracle = enumerate_fraction(in.alphabet, r.depth, config.budget, [&](const FiniteTree& t) {
                return reduced.evaluate([&](std::size_t i) { return checkers[i].check(t); });
            });
            r.equal = r.engine == r.oracle;
            return r;
        }
    }
    throw InputError("unknown input kind");
}

std::string render(const OracleReport& r) {
    std::string s = "depth=" + std::to_string(r.depth) + " engine=" + r.engine.to_string() +
                    " oracle=" + r.oracle.to_string();
    if (r.expected) s += " expected=" + r.expected->to_string();
    return s + (r.equal ? " EQUAL" : " DIFFER");
}

EmitReport emit_smt(const std::string& path, const std::string& out_path, const RunConfig& config) {
    const auto file = safety::load_automaton(path);
    const auto cert = safety::emit_real_formula(file.automaton, config.smt_bound);
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << cert.text;
    if (!out) throw InputError("failed writing '" + out_path + "'");
    return {cert.variables, cert.measure_symbol};
}

namespace {

void add_run_options(CLI::App& cmd, RunConfig& c, std::string& mode, std::string& format) {
    cmd.add_option("--tol", c.tolerance, "convergence tolerance")->envname("TREEMEASURE_TOL")->check(CLI::PositiveNumber);
    cmd.add_option("--max-iters", c.max_iters, "iteration cap")->envname("TREEMEASURE_MAX_ITERS")->check(CLI::PositiveNumber);
    cmd.add_option("--mode", mode, "numeric backend")->envname("TREEMEASURE_MODE")->check(CLI::IsMember({"exact", "float"}));
    cmd.add_option("--budget", c.budget, "enumeration budget (trees)")->envname("TREEMEASURE_BUDGET")->check(CLI::PositiveNumber);
    cmd.add_option("--format", format, "output format")
        ->envname("TREEMEASURE_FORMAT")
        ->check(CLI::IsMember({"rational", "decimal", "json"}));
    cmd.add_option("--digits", c.digits, "decimal digits")->envname("TREEMEASURE_DIGITS")->check(CLI::Range(1, 17));
    cmd.add_option("--threads", c.threads, "worker threads (0: hardware)")->envname("TREEMEASURE_THREADS");
}

void finish_config(RunConfig& c, const std::string& mode, const std::string& format) {
    c.mode = mode == "float" ? safety::NumericMode::Float : safety::NumericMode::Exact;
    c.format = format == "decimal" ? Format::Decimal : format == "json" ? Format::Json : Format::Rational;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uniform measure of regular languages of infinite binary trees", "treemeasure"};
    app.require_subcommand(1);
    RunConfig config;
    std::string mode = "exact", format = "rational", kind_name, path, out_path;
    unsigned oracle_depth = 0;
    std::string emit_path;

    auto* measure = app.add_subcommand("measure", "compute the measure of a language");
    measure->add_option("kind", kind_name, "automaton | cq | bccq | fo | finite")->required();
    measure->add_option("path", path, "input file")->required()->check(CLI::ExistingFile);
    add_run_options(*measure, config, mode, format);
    auto* measure_depth = measure->add_option("--oracle-depth", oracle_depth, "also cross-check at this depth");
    measure->add_option("--emit-smt", emit_path, "also write the SMT-LIB certificate (automaton only)");

    auto* oracle = app.add_subcommand("oracle", "cross-check the engine against brute-force enumeration");
    oracle->add_option("kind", kind_name, "automaton | cq | bccq | fo | finite")->required();
    oracle->add_option("path", path, "input file")->required()->check(CLI::ExistingFile);
    auto* oracle_positional = oracle->add_option("depth", oracle_depth, "depth / tree height");
    auto* oracle_flag = oracle->add_option("--oracle-depth", oracle_depth, "depth / tree height");
    oracle_positional->excludes(oracle_flag);
    add_run_options(*oracle, config, mode, format);

    auto* emit = app.add_subcommand("emit-smt", "write the SMT-LIB certificate of an automaton");
    emit->add_option("path", path, "automaton file")->required()->check(CLI::ExistingFile);
    emit->add_option("out", out_path, "output .smt2 file")->required();
    emit->add_option("--bound", config.smt_bound, "maximal number of distribution variables")
        ->envname("TREEMEASURE_SMT_BOUND");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_code::ok : exit_code::input;
    }
    finish_config(config, mode, format);

    try {
        if (measure->parsed()) {
            const Kind kind = parse_kind(kind_name);
            const auto result = compute_measure(kind, path, config);
            for (const auto& w : result.warnings) err << "warning: " << w << '\n';
            out << render(result, config.format, config.digits) << '\n';
            if (!emit_path.empty()) {
                if (kind != Kind::Automaton) throw InputError("--emit-smt applies to automata only");
                const auto report = emit_smt(path, emit_path, config);
                out << "smt: " << emit_path << " N=" << report.variables << " measure=" << report.measure_symbol << '\n';
            }
            if (measure_depth->count() > 0) {
                const auto report = run_oracle(kind, path, oracle_depth, config);
                out << render(report) << '\n';
                if (!report.equal) return exit_code::differ;
            }
            return exit_code::ok;
        }
        if (oracle->parsed()) {
            std::optional<unsigned> depth;
            if (oracle_positional->count() + oracle_flag->count() > 0) depth = oracle_depth;
            const auto report = run_oracle(parse_kind(kind_name), path, depth, config);
            out << render(report) << '\n';
            return report.equal ? exit_code::ok : exit_code::differ;
        }
        if (emit->parsed()) {
            const auto report = emit_smt(path, out_path, config);
            out << "N=" << report.variables << " measure=" << report.measure_symbol << '\n';
            return exit_code::ok;
        }
    } catch (const InputError& e) {
        err << path;
        if (e.line() > 0) err << ':' << e.line() << ':' << e.column();
        err << ": error: " << e.message() << '\n';
        return exit_code::input;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << " (required " << e.required() << ")\n";
        return exit_code::budget;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::resource;
    }
    return exit_code::ok;
}

}  // namespace treemeasure::cli
