#pragma once

#include "treemeasure/rational.hpp"
#include "treemeasure/safety/automaton.hpp"
#include "treemeasure/safety/distribution.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace treemeasure::safety {

/// Interned types with a memoised δ̂.
class TypeTable {
public:
    using Id = std::uint32_t;

    explicit TypeTable(const SafetyAutomaton& automaton);

    Id intern(const StateSet& type);
    const StateSet& type(Id id) const { return types_[id]; }
    bool accepting(Id id) const { return accepting_[id] != 0; }
    Id delta(Symbol a, Id left, Id right);
    std::size_t size() const noexcept { return types_.size(); }
    const SafetyAutomaton& automaton() const noexcept { return automaton_; }

private:
    const SafetyAutomaton& automaton_;
    std::vector<StateSet> types_;
    std::vector<char> accepting_;
    std::unordered_map<StateSet, Id> ids_;
    std::unordered_map<std::uint64_t, Id> delta_cache_;
};

inline constexpr std::size_t kDefaultExactBitLimit = std::size_t{1} << 28;

/// Exact iteration α_0 = 𝟙_Q, α_{d+1} = ℱ(α_d). Holds, for every type R, the
/// number of full trees of height d with type R; α_d(R) = count / |Γ|^(2^(d+1)-1).
class ExactIterator {
public:
    explicit ExactIterator(const SafetyAutomaton& automaton, std::size_t bit_limit = kDefaultExactBitLimit);

    unsigned depth() const noexcept { return depth_; }
    /// Advances one depth; throws ResourceError past the bit limit.
    void step();
    /// True iff the last step left the distribution unchanged.
    bool stabilized() const noexcept { return stabilized_; }

    /// Number of trees of the current height whose type meets I.
    BigInt accepting_count() const;
    /// |Γ|^(2^(d+1)-1).
    BigInt tree_count() const;
    /// 2^(d+1)-1, the node count of the current height.
    std::uint64_t node_exponent() const noexcept { return nodes_; }
    /// Accepting count one depth further, without advancing.
    BigInt next_accepting_count();
    /// Exact test of M_d <= M_{d-1} against the previous accepting count.
    bool measure_not_above(const BigInt& previous_accepting) const;
    Rational measure() const;
    double measure_double() const;
    TypeDistribution distribution() const;
    FloatDistribution float_distribution() const;
    /// Bit length of the largest count.
    std::size_t bits() const;

private:
    TypeTable table_;
    std::size_t bit_limit_;
    unsigned depth_ = 0;
    bool stabilized_ = false;
    std::vector<std::pair<TypeTable::Id, BigInt>> counts_;  // non-empty types only
    std::uint64_t nodes_ = 1;
    unsigned symbol_bits_ = 0;  // log2 |Γ| when |Γ| is a power of two, else 0

    double ratio(const BigInt& count) const;
    std::map<TypeTable::Id, BigInt> accumulate(bool accepting_only);
    /// c * |Γ|^e.
    BigInt scaled(const BigInt& c, std::uint64_t e) const;
};

/// M_d computed exactly.
Rational exact_depth_measure(const SafetyAutomaton& a, unsigned d, std::size_t bit_limit = kDefaultExactBitLimit);
/// α_d computed exactly.
TypeDistribution exact_type_distribution(const SafetyAutomaton& a, unsigned d,
                                         std::size_t bit_limit = kDefaultExactBitLimit);

struct BruteForceResult {
    Rational measure;
    TypeDistribution types;
    std::uint64_t trees = 0;
    std::uint64_t accepted = 0;
};

/// Enumerates every full tree of height d and tallies types. Leaves are typed Q,
/// so only the labels of the top d levels matter and the result is M_d.
BruteForceResult brute_force_depth_measure(const SafetyAutomaton& a, unsigned d,
                                           std::uint64_t budget = kDefaultEnumerationBudget);

enum class IterationStatus { ExactStabilized, ToleranceConverged, IterationCapped };

std::string to_string(IterationStatus s);

enum class NumericMode { Exact, Float };

struct IterationOptions {
    double tolerance = 1e-9;
    std::uint64_t max_iters = 1'000'000;
    NumericMode mode = NumericMode::Exact;
    /// Exact phase ends once counts exceed this many bits; iteration continues in floats.
    std::size_t exact_bit_limit = std::size_t{1} << 16;
    std::size_t max_support = std::size_t{1} << 16;
};

struct MeasureEstimate {
    /// M_0, M_1, ..., M_d.
    std::vector<double> trace;
    /// Last M_d: an upper bound on the measure (up to rounding in the float phase).
    double value = 1.0;
    /// Set when the last M_d is known exactly.
    std::optional<Rational> exact;
    IterationStatus status = IterationStatus::IterationCapped;
    std::uint64_t iterations = 0;
    double last_delta = 0.0;
    /// Distribution reached at the end of iteration.
    FloatDistribution distribution;
    std::optional<TypeDistribution> exact_distribution;
};

/// Iterates ℱ from 𝟙_Q. Stops on exact stabilization, when both |M_{d+1} - M_d|
/// and the largest change of α fall below the tolerance, or at max_iters.
MeasureEstimate iterate_measure(const SafetyAutomaton& a, const IterationOptions& options = {});

}  // namespace treemeasure::safety
