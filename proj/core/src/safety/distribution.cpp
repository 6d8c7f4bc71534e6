#include "treemeasure/safety/distribution.hpp"

#include "treemeasure/error.hpp"
#include "treemeasure/safety/fixpoint.hpp"

#include <algorithm>
#include <functional>

namespace treemeasure::safety {

FloatDistribution to_float(const TypeDistribution& d) {
    FloatDistribution out;
    for (const auto& [r, w] : d.entries()) out.set(r, w.to_double());
    return out;
}

double max_difference(const FloatDistribution& a, const FloatDistribution& b) {
    double m = 0;
    for (const auto& [r, w] : a.entries()) m = std::max(m, std::abs(w - b.at(r)));
    for (const auto& [r, w] : b.entries())
        if (!a.entries().count(r)) m = std::max(m, std::abs(w));
    return m;
}

namespace {

template <class Weight>
Distribution<Weight> apply_F_impl(const SafetyAutomaton& a, const Distribution<Weight>& alpha) {
    TypeTable table(a);
    std::vector<std::pair<TypeTable::Id, Weight>> support;
    for (const auto& [r, w] : alpha.entries()) support.emplace_back(table.intern(r), w);
    std::vector<Weight> acc;
    const auto k = static_cast<Symbol>(a.alphabet()->size());
    for (Symbol s = 0; s < k; ++s) {
        for (const auto& [i, wi] : support) {
            for (const auto& [j, wj] : support) {
                const auto r = table.delta(s, i, j);
                if (acc.size() <= r) acc.resize(table.size(), Weight(0));
                acc[r] += wi * wj;
            }
        }
    }
    Distribution<Weight> out;
    const Weight scale = Weight(1) / Weight(static_cast<long>(k));
    for (std::size_t r = 0; r < acc.size(); ++r)
        if (acc[r] != Weight(0)) out.set(table.type(static_cast<TypeTable::Id>(r)), acc[r] * scale);
    return out;
}

}  // namespace

TypeDistribution apply_F(const SafetyAutomaton& a, const TypeDistribution& alpha) { return apply_F_impl(a, alpha); }
FloatDistribution apply_F(const SafetyAutomaton& a, const FloatDistribution& alpha) { return apply_F_impl(a, alpha); }

Rational measure_of(const SafetyAutomaton& a, const TypeDistribution& alpha) { return alpha.measure(a.initial()); }
double measure_of(const SafetyAutomaton& a, const FloatDistribution& alpha) { return alpha.measure(a.initial()); }

std::vector<std::uint64_t> upward_closed_families(std::size_t n) {
    if (n > 5) throw ResourceError("upward-closed family enumeration limited to 5 states");
    const std::uint64_t subsets = std::uint64_t{1} << n;
    auto up = [&](std::uint64_t s) {
        std::uint64_t family = 0;
        for (std::uint64_t t = 0; t < subsets; ++t)
            if ((s & t) == s) family |= std::uint64_t{1} << t;
        return family;
    };
    std::vector<std::uint64_t> up_of(subsets);
    for (std::uint64_t s = 0; s < subsets; ++s) up_of[s] = up(s);

    // Each upward-closed family is generated by exactly one antichain of minimal sets.
    std::vector<std::uint64_t> out;
    std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> extend = [&](std::uint64_t next,
                                                                                  std::uint64_t chosen,
                                                                                  std::uint64_t family) {
        if (next == subsets) {
            out.push_back(family);
            return;
        }
        extend(next + 1, chosen, family);
        bool comparable = false;
        for (std::uint64_t s = 0; s < subsets && !comparable; ++s) {
            if (!((chosen >> s) & 1U)) continue;
            comparable = (s & next) == s || (s & next) == next;
        }
        if (!comparable) extend(next + 1, chosen | (std::uint64_t{1} << next), family | up_of[next]);
    };
    extend(0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

template <class Weight, class Leq>
bool leq_impl(const Distribution<Weight>& alpha, const Distribution<Weight>& beta, std::size_t n, std::size_t bound,
              Leq leq) {
    if (n > bound)
        throw ResourceError("order check over " + std::to_string(n) + " states exceeds the bound of " +
                            std::to_string(bound));
    const StateSet universe = StateSet::full(n);
    for (const auto* d : {&alpha, &beta})
        for (const auto& [r, w] : d->entries())
            if (!r.is_subset_of(universe)) throw InputError("distribution support outside the state set");
    for (std::uint64_t family : upward_closed_families(n)) {
        Weight sa(0), sb(0);
        for (const auto& [r, w] : alpha.entries())
            if ((family >> r.low_mask()) & 1U) sa += w;
        for (const auto& [r, w] : beta.entries())
            if ((family >> r.low_mask()) & 1U) sb += w;
        if (!leq(sa, sb)) return false;
    }
    return true;
}

}  // namespace

bool leq_distributions(const TypeDistribution& alpha, const TypeDistribution& beta, std::size_t state_count,
                       std::size_t bound) {
    return leq_impl(alpha, beta, state_count, bound, [](const Rational& x, const Rational& y) { return x <= y; });
}

bool leq_distributions(const FloatDistribution& alpha, const FloatDistribution& beta, std::size_t state_count,
                       double eps, std::size_t bound) {
    return leq_impl(alpha, beta, state_count, bound, [eps](double x, double y) { return x <= y + eps; });
}

std::string to_string(const TypeDistribution& d, const std::vector<std::string>* names) {
    std::string out;
    for (const auto& [r, w] : d.entries()) {
        if (!out.empty()) out += ' ';
        out += r.to_string(names) + ":" + w.to_string();
    }
    return out.empty() ? "{}" : out;
}

}  // namespace treemeasure::safety
