#pragma once

#include "treemeasure/position.hpp"
#include "treemeasure/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace treemeasure {

using Symbol = std::uint16_t;

/// Finite ordered set of label names.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols);

    static std::shared_ptr<const Alphabet> make(std::vector<std::string> symbols) {
        return std::make_shared<const Alphabet>(std::move(symbols));
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& name(Symbol s) const { return symbols_.at(s); }
    const std::vector<std::string>& names() const noexcept { return symbols_; }
    std::optional<Symbol> find(std::string_view name) const;
    /// Throws InputError for unknown names.
    Symbol at(std::string_view name) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Symbol> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// Number of nodes of a full tree of the given height.
std::uint64_t full_tree_size(unsigned height);

/// Immutable prefix-closed labelled binary tree.
class FiniteTree {
public:
    /// Full tree of the given height; `labels` indexed by breadth-first rank.
    static FiniteTree full(AlphabetPtr alphabet, unsigned height, std::vector<Symbol> labels);
    /// Arbitrary tree; the domain must be non-empty and prefix-closed.
    static FiniteTree sparse(AlphabetPtr alphabet, std::map<Position, Symbol> labels);
    /// Full tree of height d labelled by a generator.
    static FiniteTree generate(AlphabetPtr alphabet, unsigned height,
                               const std::function<Symbol(const Position&)>& label);
    /// Parses the nested-parentheses literal, e.g. "(a (b) (c (a) (b)))"; "_" marks an absent child.
    static FiniteTree parse(AlphabetPtr alphabet, std::string_view literal);

    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
    bool contains(const Position& u) const;
    /// Throws InputError outside the domain.
    Symbol label(const Position& u) const;
    /// Unchecked access for full trees by breadth-first rank.
    Symbol label_at_rank(std::uint64_t rank) const { return dense_[rank]; }

    bool is_full() const noexcept { return full_; }
    /// Maximal depth of a node.
    unsigned height() const noexcept { return height_; }
    std::size_t node_count() const;
    /// Domain in breadth-first order.
    std::vector<Position> positions() const;
    /// Full trees only: labels by breadth-first rank.
    const std::vector<Symbol>& dense_labels() const noexcept { return dense_; }

    FiniteTree subtree_at(const Position& u) const;
    /// Full tree of height d agreeing with this tree; throws if some required node is missing.
    FiniteTree restrict_to_depth(unsigned d) const;

    std::string to_string() const;

    friend bool operator==(const FiniteTree& a, const FiniteTree& b);

private:
    FiniteTree() = default;
    void write(std::string& out, const Position& u) const;

    AlphabetPtr alphabet_;
    bool full_ = false;
    unsigned height_ = 0;
    std::vector<Symbol> dense_;
    std::map<Position, Symbol> sparse_;
};

FiniteTree restrict_to_depth(const FiniteTree& t, unsigned d);
FiniteTree restrict_to_depth(AlphabetPtr alphabet, const std::function<Symbol(const Position&)>& generator,
                             unsigned d);
FiniteTree subtree_at(const FiniteTree& t, const Position& u);

/// |Γ|^{-|dom t|}: the measure of the set of infinite trees extending t.
Rational ball_measure(const FiniteTree& t);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 26;

/// Number of full trees of height h over k symbols, k^(2^(h+1)-1).
BigInt full_tree_count(std::size_t symbols, unsigned height);

/// Indexed enumeration of all full trees of one height. Tree i has its
/// breadth-first label vector equal to the base-|Γ| digits of i, root most
/// significant, so increasing indices are lexicographic.
class FullTreeEnumerator {
public:
    /// Throws BudgetError naming the exact count when it exceeds `budget`.
    FullTreeEnumerator(AlphabetPtr alphabet, unsigned height,
                       std::uint64_t budget = kDefaultEnumerationBudget);

    std::uint64_t count() const noexcept { return count_; }
    unsigned height() const noexcept { return height_; }
    std::uint64_t node_count() const noexcept { return nodes_; }
    const AlphabetPtr& alphabet() const noexcept { return alphabet_; }

    void labels_at(std::uint64_t index, std::vector<Symbol>& labels) const;
    FiniteTree tree_at(std::uint64_t index) const;

    /// Calls f(tree) for every tree in order.
    void for_each(const std::function<void(const FiniteTree&)>& f) const;

private:
    AlphabetPtr alphabet_;
    unsigned height_;
    std::uint64_t nodes_;
    std::uint64_t count_;
};

/// Convenience: every full tree of the given height.
std::vector<FiniteTree> enumerate_full_trees(AlphabetPtr alphabet, unsigned height,
                                             std::uint64_t budget = kDefaultEnumerationBudget);

/// Throws BudgetError if k^(2^(h+1)-1) exceeds the budget; otherwise returns it.
std::uint64_t checked_tree_count(std::size_t symbols, unsigned height, std::uint64_t budget);

}  // namespace treemeasure
