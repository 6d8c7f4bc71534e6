#include "treemeasure/safety/state_set.hpp"

namespace treemeasure::safety {

StateSet StateSet::full(std::size_t n) {
    StateSet s;
    s.words_.assign((n + 63) / 64, ~std::uint64_t{0});
    if (n % 64) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    return s;
}

StateSet StateSet::from_mask(std::uint64_t mask) {
    StateSet s;
    if (mask) s.words_.push_back(mask);
    return s;
}

StateSet StateSet::of(std::initializer_list<State> states) {
    StateSet s;
    for (State q : states) s.insert(q);
    return s;
}

void StateSet::insert(State q) {
    const std::size_t w = q / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (q % 64);
}

void StateSet::erase(State q) {
    const std::size_t w = q / 64;
    if (w >= words_.size()) return;
    words_[w] &= ~(std::uint64_t{1} << (q % 64));
    trim();
}

void StateSet::trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

std::size_t StateSet::size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool StateSet::intersects(const StateSet& other) const noexcept {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (words_[i] & other.words_[i]) return true;
    return false;
}

bool StateSet::is_subset_of(const StateSet& other) const noexcept {
    if (words_.size() > other.words_.size()) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

StateSet StateSet::operator|(const StateSet& other) const {
    StateSet s = words_.size() >= other.words_.size() ? *this : other;
    const auto& small = words_.size() >= other.words_.size() ? other.words_ : words_;
    for (std::size_t i = 0; i < small.size(); ++i) s.words_[i] |= small[i];
    return s;
}

StateSet StateSet::operator&(const StateSet& other) const {
    StateSet s;
    const std::size_t n = std::min(words_.size(), other.words_.size());
    s.words_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.words_[i] = words_[i] & other.words_[i];
    s.trim();
    return s;
}

std::vector<State> StateSet::members() const {
    std::vector<State> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t w = words_[i];
        while (w) {
            const int b = std::countr_zero(w);
            out.push_back(static_cast<State>(i * 64 + static_cast<std::size_t>(b)));
            w &= w - 1;
        }
    }
    return out;
}

std::string StateSet::to_string(const std::vector<std::string>* names) const {
    std::string out = "{";
    bool first = true;
    for (State q : members()) {
        if (!first) out += ',';
        first = false;
        out += names && q < names->size() ? (*names)[q] : std::to_string(q);
    }
    return out + "}";
}

}  // namespace treemeasure::safety
