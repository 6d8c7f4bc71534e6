#pragma once

#include "treemeasure/rational.hpp"
#include "treemeasure/safety/automaton.hpp"
#include "treemeasure/safety/state_set.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace treemeasure::safety {

/// Finitely supported distribution over subsets of Q. Zero entries are not stored.
template <class Weight>
class Distribution {
public:
    using Map = std::map<StateSet, Weight>;

    Distribution() = default;
    static Distribution point(const StateSet& r) {
        Distribution d;
        d.mass_[r] = Weight(1);
        return d;
    }

    Weight at(const StateSet& r) const {
        auto it = mass_.find(r);
        return it == mass_.end() ? Weight(0) : it->second;
    }
    void add(const StateSet& r, const Weight& w) {
        if (w == Weight(0)) return;
        auto [it, inserted] = mass_.emplace(r, w);
        if (!inserted) {
            it->second += w;
            if (it->second == Weight(0)) mass_.erase(it);
        }
    }
    void set(const StateSet& r, const Weight& w) {
        if (w == Weight(0))
            mass_.erase(r);
        else
            mass_[r] = w;
    }

    const Map& entries() const noexcept { return mass_; }
    std::size_t support_size() const noexcept { return mass_.size(); }

    Weight total() const {
        Weight s(0);
        for (const auto& [r, w] : mass_) s += w;
        return s;
    }
    /// 𝓜(α): mass of the sets meeting `initial`.
    Weight measure(const StateSet& initial) const {
        Weight s(0);
        for (const auto& [r, w] : mass_)
            if (r.intersects(initial)) s += w;
        return s;
    }

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    Map mass_;
};

using TypeDistribution = Distribution<Rational>;
using FloatDistribution = Distribution<double>;

FloatDistribution to_float(const TypeDistribution& d);

/// Largest |α(R) - β(R)| over all R.
double max_difference(const FloatDistribution& a, const FloatDistribution& b);

/// ℱ(α)(R) = |Γ|^-1 Σ_a Σ_{δ̂_a(RL,RR)=R} α(RL) α(RR).
TypeDistribution apply_F(const SafetyAutomaton& a, const TypeDistribution& alpha);
FloatDistribution apply_F(const SafetyAutomaton& a, const FloatDistribution& alpha);

Rational measure_of(const SafetyAutomaton& a, const TypeDistribution& alpha);
double measure_of(const SafetyAutomaton& a, const FloatDistribution& alpha);

inline constexpr std::size_t kDefaultOrderBound = 4;

/// Upward-closed families of subsets of an n-element set, each a bitmask over
/// the 2^n subsets (bit i set iff the subset with mask i belongs). Requires n <= 5.
std::vector<std::uint64_t> upward_closed_families(std::size_t n);

/// α ⪯ β: every upward-closed family has no more α-mass than β-mass.
/// Throws ResourceError when state_count exceeds `bound`.
bool leq_distributions(const TypeDistribution& alpha, const TypeDistribution& beta, std::size_t state_count,
                       std::size_t bound = kDefaultOrderBound);

/// Float variant with additive slack `eps` per family.
bool leq_distributions(const FloatDistribution& alpha, const FloatDistribution& beta, std::size_t state_count,
                       double eps, std::size_t bound = kDefaultOrderBound);

std::string to_string(const TypeDistribution& d, const std::vector<std::string>* names = nullptr);

}  // namespace treemeasure::safety
