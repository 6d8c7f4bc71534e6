#include "treemeasure/position.hpp"

#include "treemeasure/error.hpp"

#include <bit>

namespace treemeasure {

Position Position::from_bits(unsigned depth, std::uint64_t bits) {
    if (depth > kMaxDepth) throw InputError("position deeper than " + std::to_string(kMaxDepth));
    if (depth < 64 && (bits >> depth) != 0) throw InputError("position bits exceed depth");
    return Position(depth, bits);
}

Position Position::parse(std::string_view word) {
    if (word == "e" || word == "ε") return root();
    Position p;
    for (char c : word) {
        if (c == 'L' || c == 'l')
            p = p.left();
        else if (c == 'R' || c == 'r')
            p = p.right();
        else
            throw InputError("bad direction '" + std::string(1, c) + "' in position");
    }
    return p;
}

Position Position::from_bfs_rank(std::uint64_t rank) {
    const unsigned depth = static_cast<unsigned>(std::bit_width(rank + 1)) - 1;
    return from_bits(depth, rank + 1 - (std::uint64_t{1} << depth));
}

Position Position::child(Direction d) const {
    if (depth_ >= kMaxDepth) throw InputError("position deeper than " + std::to_string(kMaxDepth));
    return Position(depth_ + 1, (bits_ << 1) | static_cast<std::uint64_t>(d));
}

Position Position::concat(const Position& v) const {
    if (depth_ + v.depth_ > kMaxDepth) throw InputError("position deeper than " + std::to_string(kMaxDepth));
    return Position(depth_ + v.depth_, (bits_ << v.depth_) | v.bits_);
}

std::string Position::to_string() const {
    if (depth_ == 0) return "e";
    std::string s;
    for (unsigned i = 0; i < depth_; ++i) s += at(i) == Direction::Left ? 'L' : 'R';
    return s;
}

unsigned common_prefix_length(const Position& u, const Position& v) noexcept {
    unsigned k = u.depth() < v.depth() ? u.depth() : v.depth();
    std::uint64_t a = u.bits() >> (u.depth() - k);
    std::uint64_t b = v.bits() >> (v.depth() - k);
    const std::uint64_t diff = a ^ b;
    if (diff == 0) return k;
    return k - static_cast<unsigned>(std::bit_width(diff));
}

unsigned distance(const Position& u, const Position& v) noexcept {
    return u.depth() + v.depth() - 2 * common_prefix_length(u, v);
}

}  // namespace treemeasure
