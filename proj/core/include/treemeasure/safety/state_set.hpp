#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace treemeasure::safety {

using State = std::uint32_t;

/// Set of automaton states. Ordered as the big integer whose bit q is set
/// iff q is a member, so {} < {0} < {1} < {0,1} < {2} < ...
class StateSet {
public:
    StateSet() = default;
    static StateSet full(std::size_t n);
    static StateSet from_mask(std::uint64_t mask);
    static StateSet of(std::initializer_list<State> states);

    bool contains(State q) const noexcept {
        const std::size_t w = q / 64;
        return w < words_.size() && ((words_[w] >> (q % 64)) & 1U);
    }
    void insert(State q);
    void erase(State q);

    bool empty() const noexcept { return words_.empty(); }
    std::size_t size() const noexcept;
    bool intersects(const StateSet& other) const noexcept;
    bool is_subset_of(const StateSet& other) const noexcept;
    StateSet operator|(const StateSet& other) const;
    StateSet operator&(const StateSet& other) const;

    /// Members in increasing order.
    std::vector<State> members() const;
    /// Low 64 bits of the mask.
    std::uint64_t low_mask() const noexcept { return words_.empty() ? 0 : words_[0]; }
    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    /// "{p,top}" given state names, or "{0,1}" without.
    std::string to_string(const std::vector<std::string>* names = nullptr) const;

    friend bool operator==(const StateSet&, const StateSet&) = default;
    friend std::strong_ordering operator<=>(const StateSet& a, const StateSet& b) noexcept {
        if (a.words_.size() != b.words_.size()) return a.words_.size() <=> b.words_.size();
        for (std::size_t i = a.words_.size(); i-- > 0;)
            if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
        return std::strong_ordering::equal;
    }

private:
    void trim();
    std::vector<std::uint64_t> words_;  // no trailing zero words
};

}  // namespace treemeasure::safety

template <>
struct std::hash<treemeasure::safety::StateSet> {
    std::size_t operator()(const treemeasure::safety::StateSet& s) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : s.words()) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ULL;
        return h;
    }
};
