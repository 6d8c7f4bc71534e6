#pragma once

#include "treemeasure/rational.hpp"
#include "treemeasure/safety/fixpoint.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treemeasure::cli {

enum class Kind { Automaton, Cq, Bccq, Fo, Finite };
enum class Format { Rational, Decimal, Json };

Kind parse_kind(const std::string& s);
std::string to_string(Kind k);

struct RunConfig {
    safety::NumericMode mode = safety::NumericMode::Exact;
    double tolerance = 1e-9;
    std::uint64_t max_iters = 1'000'000;
    std::uint64_t budget = kDefaultEnumerationBudget;
    Format format = Format::Rational;
    int digits = 6;
    std::optional<unsigned> oracle_depth;
    std::optional<std::string> emit_smt;
    std::size_t smt_bound = 4096;
    unsigned threads = 0;
};

struct MeasureResult {
    /// Set when the pipeline produced an exact value.
    std::optional<Rational> exact;
    double value = 0.0;
    /// "exact" for the enumeration pipelines, an iteration status otherwise.
    std::string status;
    std::uint64_t iterations = 0;
    double last_delta = 0.0;
    std::vector<double> trace;
    std::vector<std::string> warnings;
};

MeasureResult compute_measure(Kind kind, const std::string& path, const RunConfig& config);
std::string render(const MeasureResult& r, Format format, int digits = 6);

struct OracleReport {
    unsigned depth = 0;
    Rational engine;
    Rational oracle;
    /// Golden value recorded in the input file, if any.
    std::optional<Rational> expected;
    bool equal = false;
};

OracleReport run_oracle(Kind kind, const std::string& path, std::optional<unsigned> depth, const RunConfig& config);
std::string render(const OracleReport& r);

struct EmitReport {
    std::size_t variables = 0;
    std::string measure_symbol;
};

EmitReport emit_smt(const std::string& path, const std::string& out_path, const RunConfig& config);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int differ = 1;
inline constexpr int input = 2;
inline constexpr int budget = 3;
inline constexpr int resource = 4;
}  // namespace exit_code

}  // namespace treemeasure::cli
