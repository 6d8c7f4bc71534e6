#include "treemeasure/safety/fixpoint.hpp"

#include "treemeasure/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace treemeasure::safety {

TypeTable::TypeTable(const SafetyAutomaton& automaton) : automaton_(automaton) {}

TypeTable::Id TypeTable::intern(const StateSet& type) {
    auto [it, inserted] = ids_.emplace(type, static_cast<Id>(types_.size()));
    if (inserted) {
        types_.push_back(type);
        accepting_.push_back(type.intersects(automaton_.initial()) ? 1 : 0);
    }
    return it->second;
}

TypeTable::Id TypeTable::delta(Symbol a, Id left, Id right) {
    const std::uint64_t key = (std::uint64_t{left} << 40) | (std::uint64_t{right} << 16) | a;
    auto it = delta_cache_.find(key);
    if (it != delta_cache_.end()) return it->second;
    const Id r = intern(automaton_.powerset_delta(a, types_[left], types_[right]));
    delta_cache_.emplace(key, r);
    return r;
}

namespace {

// mantissa * 2^exponent for a big integer.
double split(const BigInt& c, long& exponent) { return mpz_get_d_2exp(&exponent, c.get_mpz_t()); }

}  // namespace

ExactIterator::ExactIterator(const SafetyAutomaton& automaton, std::size_t bit_limit)
    : table_(automaton), bit_limit_(bit_limit) {
    const std::size_t k = automaton.alphabet()->size();
    if ((k & (k - 1)) == 0) symbol_bits_ = static_cast<unsigned>(std::countr_zero(k));
    const StateSet all = automaton.all_states();
    if (!all.empty()) counts_.emplace_back(table_.intern(all), BigInt(static_cast<unsigned long>(k)));
}

double ExactIterator::ratio(const BigInt& count) const {
    if (count == 0) return 0.0;
    long e = 0;
    const double m = split(count, e);
    const std::size_t k = table_.automaton().alphabet()->size();
    if (symbol_bits_ != 0 || k == 1)
        return std::ldexp(m, static_cast<int>(e - static_cast<long>(symbol_bits_ * nodes_)));
    const long double log_total = static_cast<long double>(nodes_) * std::log2(static_cast<long double>(k));
    return static_cast<double>(m * std::exp2(static_cast<long double>(e) - log_total));
}

BigInt ExactIterator::scaled(const BigInt& c, std::uint64_t e) const {
    BigInt out;
    if (symbol_bits_ != 0 || table_.automaton().alphabet()->size() == 1) {
        mpz_mul_2exp(out.get_mpz_t(), c.get_mpz_t(), symbol_bits_ * e);
        return out;
    }
    return c * power(table_.automaton().alphabet()->size(), e);
}

BigInt ExactIterator::tree_count() const { return scaled(BigInt(1), nodes_); }

std::map<TypeTable::Id, BigInt> ExactIterator::accumulate(bool accepting_only) {
    const std::size_t k = table_.automaton().alphabet()->size();
    // c'(R) = Σ_{i,j} m_R(i,j) c_i c_j with m_R(i,j) = #{a | δ̂_a(i,j) = R}. Each
    // m_R is split into rectangles by grouping equal rows (or equal columns,
    // whichever is fewer) so that one big multiplication serves a whole group.
    // The empty type is absorbing (a child of type ∅ forces ∅), so it is not
    // tracked; its count is implied by the total.
    const auto symbols = static_cast<Symbol>(k);
    const std::size_t n = counts_.size();
    std::map<TypeTable::Id, std::vector<std::uint32_t>> multiplicity;
    for (Symbol s = 0; s < symbols; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                auto r = table_.delta(s, counts_[i].first, counts_[j].first);
                if (table_.type(r).empty()) continue;
                if (accepting_only) {
                    if (!table_.accepting(r)) continue;
                    r = 0;  // all accepting outputs share one matrix
                }
                auto& m = multiplicity[r];
                if (m.empty()) m.assign(n * n, 0);
                ++m[i * n + j];
            }
        }
    }
    std::map<TypeTable::Id, BigInt> acc;
    BigInt product, left, right;
    for (const auto& [r, m] : multiplicity) {
        std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> rows, cols;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> row(m.begin() + static_cast<long>(i * n),
                                           m.begin() + static_cast<long>((i + 1) * n));
            std::vector<std::uint32_t> col(n);
            for (std::size_t j = 0; j < n; ++j) col[j] = m[j * n + i];
            if (std::any_of(row.begin(), row.end(), [](auto x) { return x != 0; })) rows[row].push_back(i);
            if (std::any_of(col.begin(), col.end(), [](auto x) { return x != 0; })) cols[col].push_back(i);
        }
        auto& slot = acc[r];
        for (const auto& groups : {&rows, &cols}) {
            if (groups->size() > std::min(rows.size(), cols.size())) continue;
            for (const auto& [pattern, members] : *groups) {
                left = 0;
                for (std::size_t i : members) left += counts_[i].second;
                right = 0;
                for (std::size_t j = 0; j < n; ++j)
                    if (pattern[j] != 0) mpz_addmul_ui(right.get_mpz_t(), counts_[j].second.get_mpz_t(), pattern[j]);
                product = left * right;
                slot += product;
            }
            break;
        }
    }

    return acc;
}

void ExactIterator::step() {
    const std::size_t k = table_.automaton().alphabet()->size();
    const double log_k = std::log2(static_cast<double>(k));
    const double next_bits = static_cast<double>(2 * nodes_ + 1) * log_k + 8;
    if (next_bits > static_cast<double>(bit_limit_))
        throw ResourceError("exact iteration at depth " + std::to_string(depth_ + 1) + " needs about " +
                            std::to_string(static_cast<std::uint64_t>(next_bits)) +
                            " bits per count, over the limit of " + std::to_string(bit_limit_));

    std::map<TypeTable::Id, BigInt> acc = accumulate(false);

    std::vector<std::pair<TypeTable::Id, BigInt>> next(acc.begin(), acc.end());
    const std::uint64_t previous_nodes = nodes_;
    const std::vector<double> previous_ratios = [&] {
        std::vector<double> r;
        for (const auto& [id, c] : counts_) r.push_back(ratio(c));
        return r;
    }();
    std::swap(counts_, next);
    nodes_ = 2 * nodes_ + 1;

    stabilized_ = false;
    if (next.size() == counts_.size()) {
        bool candidate = true;
        for (std::size_t i = 0; i < counts_.size() && candidate; ++i)
            candidate = next[i].first == counts_[i].first &&
                        std::abs(ratio(counts_[i].second) - previous_ratios[i]) < 1e-6;
        if (candidate) {
            stabilized_ = true;
            for (std::size_t i = 0; i < counts_.size() && stabilized_; ++i)
                stabilized_ = counts_[i].second == scaled(next[i].second, nodes_ - previous_nodes);
        }
    }
    ++depth_;
}

BigInt ExactIterator::next_accepting_count() {
    auto acc = accumulate(true);
    return acc.empty() ? BigInt(0) : acc.begin()->second;
}

bool ExactIterator::measure_not_above(const BigInt& previous_accepting) const {
    return accepting_count() <= scaled(previous_accepting, (nodes_ - 1) / 2 + 1);
}

BigInt ExactIterator::accepting_count() const {
    BigInt s = 0;
    for (const auto& [id, c] : counts_)
        if (table_.accepting(id)) s += c;
    return s;
}

Rational ExactIterator::measure() const { return Rational(accepting_count(), tree_count()); }

double ExactIterator::measure_double() const { return ratio(accepting_count()); }

TypeDistribution ExactIterator::distribution() const {
    TypeDistribution d;
    const BigInt total = tree_count();
    BigInt rest = total;
    for (const auto& [id, c] : counts_) {
        d.set(table_.type(id), Rational(c, total));
        rest -= c;
    }
    if (rest != 0) d.set(StateSet{}, Rational(rest, total));
    return d;
}

FloatDistribution ExactIterator::float_distribution() const {
    FloatDistribution d;
    double rest = 1.0;
    for (const auto& [id, c] : counts_) {
        const double w = ratio(c);
        d.set(table_.type(id), w);
        rest -= w;
    }
    if (rest > 1e-15) d.set(StateSet{}, rest);
    return d;
}

std::size_t ExactIterator::bits() const {
    return static_cast<std::size_t>(static_cast<double>(nodes_) *
                                    std::log2(static_cast<double>(table_.automaton().alphabet()->size()))) +
           1;
}

Rational exact_depth_measure(const SafetyAutomaton& a, unsigned d, std::size_t bit_limit) {
    ExactIterator it(a, bit_limit);
    while (it.depth() < d && !it.stabilized()) it.step();
    return it.measure();
}

TypeDistribution exact_type_distribution(const SafetyAutomaton& a, unsigned d, std::size_t bit_limit) {
    ExactIterator it(a, bit_limit);
    while (it.depth() < d && !it.stabilized()) it.step();
    return it.distribution();
}

BruteForceResult brute_force_depth_measure(const SafetyAutomaton& a, unsigned d, std::uint64_t budget) {
    FullTreeEnumerator trees(a.alphabet(), d, budget);
    TypeTable table(a);
    const auto all = table.intern(a.all_states());
    const std::uint64_t n = trees.node_count();
    const std::uint64_t first_leaf = n / 2;
    std::vector<Symbol> labels;
    std::vector<TypeTable::Id> types(n);
    std::map<TypeTable::Id, std::uint64_t> tally;
    for (std::uint64_t i = 0; i < trees.count(); ++i) {
        trees.labels_at(i, labels);
        for (std::uint64_t r = n; r-- > 0;)
            types[r] = r >= first_leaf ? all : table.delta(labels[r], types[2 * r + 1], types[2 * r + 2]);
        ++tally[types[0]];
    }
    BruteForceResult out;
    out.trees = trees.count();
    const BigInt total(std::to_string(trees.count()));
    for (const auto& [id, c] : tally) {
        out.types.set(table.type(id), Rational(BigInt(std::to_string(c)), total));
        if (table.accepting(id)) out.accepted += c;
    }
    out.measure = Rational(BigInt(std::to_string(out.accepted)), total);
    return out;
}

std::string to_string(IterationStatus s) {
    switch (s) {
        case IterationStatus::ExactStabilized:
            return "exact-stabilized";
        case IterationStatus::ToleranceConverged:
            return "tolerance-converged";
        case IterationStatus::IterationCapped:
            return "iteration-capped";
    }
    return "unknown";
}

namespace {

struct FloatState {
    std::vector<std::pair<TypeTable::Id, double>> support;

    double measure(const TypeTable& table) const {
        double m = 0;
        for (const auto& [id, w] : support)
            if (table.accepting(id)) m += w;
        return m;
    }
};

FloatState float_step(TypeTable& table, const FloatState& in, std::size_t max_support) {
    const auto k = static_cast<Symbol>(table.automaton().alphabet()->size());
    std::vector<double> acc(table.size(), 0.0);
    for (Symbol s = 0; s < k; ++s) {
        for (const auto& [i, wi] : in.support) {
            for (const auto& [j, wj] : in.support) {
                const auto r = table.delta(s, i, j);
                if (r >= acc.size()) acc.resize(table.size(), 0.0);
                acc[r] += wi * wj;
            }
        }
    }
    // The input always carries ∅ (possibly with weight 0), so the exact total is
    // (Σw)^2 = 1. Renormalising keeps rounding from compounding: the mass of
    // non-empty types follows n' = n^2 in many automata, unstable at n = 1.
    double total = 0;
    for (double w : acc) total += w;
    FloatState out;
    const TypeTable::Id empty = table.intern(StateSet{});
    if (empty >= acc.size()) acc.resize(table.size(), 0.0);
    for (std::size_t r = 0; r < acc.size(); ++r)
        if (acc[r] != 0.0 || r == empty) out.support.emplace_back(static_cast<TypeTable::Id>(r), acc[r] / total);
    if (out.support.size() > max_support)
        throw ResourceError("type distribution support grew to " + std::to_string(out.support.size()) +
                            " sets, over the limit of " + std::to_string(max_support));
    return out;
}

double float_change(const FloatState& a, const FloatState& b) {
    std::map<TypeTable::Id, double> diff;
    for (const auto& [id, w] : a.support) diff[id] += w;
    for (const auto& [id, w] : b.support) diff[id] -= w;
    double m = 0;
    for (const auto& [id, w] : diff) m = std::max(m, std::abs(w));
    return m;
}

FloatDistribution to_distribution(const TypeTable& table, const FloatState& s) {
    FloatDistribution d;
    for (const auto& [id, w] : s.support) d.set(table.type(id), w);
    return d;
}

}  // namespace

MeasureEstimate iterate_measure(const SafetyAutomaton& a, const IterationOptions& options) {
    if (!(options.tolerance > 0)) throw InputError("tolerance must be positive");
    MeasureEstimate est;
    double previous = a.initial().empty() || a.state_count() == 0 ? 0.0 : 1.0;
    est.trace.push_back(previous);

    TypeTable table(a);
    FloatState current;
    bool exact_phase = options.mode == NumericMode::Exact;
    std::optional<ExactIterator> exact;
    FloatDistribution exact_previous;
    if (exact_phase) {
        exact.emplace(a);
        exact_previous = exact->float_distribution();
    } else {
        current.support.emplace_back(table.intern(a.all_states()), 1.0);
        if (!a.all_states().empty()) current.support.emplace_back(table.intern(StateSet{}), 0.0);
    }

    while (est.iterations < options.max_iters) {
        double m = 0, change = 0;
        if (exact_phase && 2 * exact->bits() + 8 > options.exact_bit_limit) {
            exact_phase = false;
            bool has_empty = false;
            for (const auto& [r, w] : exact_previous.entries()) {
                current.support.emplace_back(table.intern(r), w);
                has_empty = has_empty || r.empty();
            }
            if (!has_empty) current.support.emplace_back(table.intern(StateSet{}), 0.0);
            std::sort(current.support.begin(), current.support.end());
        }
        if (exact_phase) {
            exact->step();
            auto now = exact->float_distribution();
            m = exact->measure_double();
            change = max_difference(now, exact_previous);
            exact_previous = std::move(now);
        } else {
            FloatState next = float_step(table, current, options.max_support);
            m = next.measure(table);
            change = float_change(next, current);
            current = std::move(next);
        }
        ++est.iterations;
        est.trace.push_back(m);
        est.last_delta = std::abs(m - previous);
        previous = m;
        if (exact_phase && exact->stabilized()) {
            est.status = IterationStatus::ExactStabilized;
            est.exact = exact->measure();
            break;
        }
        if (est.last_delta < options.tolerance && change < options.tolerance) {
            est.status = IterationStatus::ToleranceConverged;
            break;
        }
    }
    est.value = est.trace.back();
    if (exact_phase) {
        est.exact_distribution = exact->distribution();
        est.distribution = exact->float_distribution();
    } else {
        est.distribution = to_distribution(table, current);
    }
    return est;
}

}  // namespace treemeasure::safety
