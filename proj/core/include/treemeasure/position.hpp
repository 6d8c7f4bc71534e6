#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace treemeasure {

enum class Direction : std::uint8_t { Left = 0, Right = 1 };

/// A word over {L, R}. Stored as (depth, bits) with the first direction in the
/// most significant used bit, so positions of equal depth order left-to-right.
class Position {
public:
    static constexpr unsigned kMaxDepth = 62;

    constexpr Position() = default;
    static Position root() { return {}; }
    static Position from_bits(unsigned depth, std::uint64_t bits);
    /// Parses "e" / "" (root) or a word such as "LRL".
    static Position parse(std::string_view word);
    /// Inverse of bfs_rank.
    static Position from_bfs_rank(std::uint64_t rank);

    unsigned depth() const noexcept { return depth_; }
    std::uint64_t bits() const noexcept { return bits_; }
    bool is_root() const noexcept { return depth_ == 0; }

    /// Direction taken at step i (0-based from the root).
    Direction at(unsigned i) const noexcept {
        return ((bits_ >> (depth_ - 1 - i)) & 1U) ? Direction::Right : Direction::Left;
    }
    Direction last() const noexcept { return (bits_ & 1U) ? Direction::Right : Direction::Left; }

    Position child(Direction d) const;
    Position left() const { return child(Direction::Left); }
    Position right() const { return child(Direction::Right); }
    /// Precondition: not the root.
    Position parent() const noexcept { return Position(depth_ - 1, bits_ >> 1); }
    Position prefix(unsigned length) const noexcept {
        return Position(length, bits_ >> (depth_ - length));
    }
    /// Concatenation uv.
    Position concat(const Position& v) const;
    /// Suffix w with this = prefix(k) w.
    Position drop(unsigned k) const noexcept {
        return Position(depth_ - k, k == depth_ ? 0 : bits_ & ((std::uint64_t{1} << (depth_ - k)) - 1));
    }

    /// u ⊑ v (reflexive).
    bool is_prefix_of(const Position& v) const noexcept {
        return depth_ <= v.depth_ && (v.bits_ >> (v.depth_ - depth_)) == bits_;
    }
    bool is_strict_prefix_of(const Position& v) const noexcept {
        return depth_ < v.depth_ && is_prefix_of(v);
    }

    /// Breadth-first rank: 2^depth - 1 + bits.
    std::uint64_t bfs_rank() const noexcept { return (std::uint64_t{1} << depth_) - 1 + bits_; }

    std::string to_string() const;

    friend bool operator==(const Position&, const Position&) = default;
    friend std::strong_ordering operator<=>(const Position& a, const Position& b) {
        if (auto c = a.depth_ <=> b.depth_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

private:
    constexpr Position(unsigned depth, std::uint64_t bits) : bits_(bits), depth_(depth) {}

    std::uint64_t bits_ = 0;
    unsigned depth_ = 0;
};

unsigned common_prefix_length(const Position& u, const Position& v) noexcept;

/// |u| + |v| - 2|lcp(u, v)|.
unsigned distance(const Position& u, const Position& v) noexcept;

}  // namespace treemeasure

template <>
struct std::hash<treemeasure::Position> {
    std::size_t operator()(const treemeasure::Position& p) const noexcept {
        return std::hash<std::uint64_t>{}(p.bfs_rank());
    }
};
