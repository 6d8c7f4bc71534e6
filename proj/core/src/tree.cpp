#include "treemeasure/tree.hpp"

#include "treemeasure/error.hpp"

#include <cctype>

namespace treemeasure {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InputError("alphabet must not be empty");
    if (symbols_.size() > 0xFFFF) throw InputError("alphabet too large");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!index_.emplace(symbols_[i], static_cast<Symbol>(i)).second)
            throw InputError("duplicate symbol '" + symbols_[i] + "' in alphabet");
    }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Symbol Alphabet::at(std::string_view name) const {
    if (auto s = find(name)) return *s;
    throw InputError("unknown symbol '" + std::string(name) + "'");
}

std::uint64_t full_tree_size(unsigned height) {
    if (height >= 63) throw ResourceError("tree height too large");
    return (std::uint64_t{1} << (height + 1)) - 1;
}

FiniteTree FiniteTree::full(AlphabetPtr alphabet, unsigned height, std::vector<Symbol> labels) {
    if (labels.size() != full_tree_size(height))
        throw InputError("full tree of height " + std::to_string(height) + " needs " +
                         std::to_string(full_tree_size(height)) + " labels");
    for (Symbol s : labels)
        if (s >= alphabet->size()) throw InputError("label outside alphabet");
    FiniteTree t;
    t.alphabet_ = std::move(alphabet);
    t.full_ = true;
    t.height_ = height;
    t.dense_ = std::move(labels);
    return t;
}

FiniteTree FiniteTree::sparse(AlphabetPtr alphabet, std::map<Position, Symbol> labels) {
    if (labels.empty()) throw InputError("tree domain must not be empty");
    unsigned height = 0;
    for (const auto& [u, s] : labels) {
        if (s >= alphabet->size()) throw InputError("label outside alphabet");
        if (!u.is_root() && !labels.count(u.parent()))
            throw InputError("tree domain is not prefix-closed at " + u.to_string());
        height = std::max(height, u.depth());
    }
    if (height < 63 && labels.size() == full_tree_size(height)) {
        std::vector<Symbol> dense;
        dense.reserve(labels.size());
        for (const auto& [u, s] : labels) dense.push_back(s);  // map order is breadth-first
        return full(std::move(alphabet), height, std::move(dense));
    }
    FiniteTree t;
    t.alphabet_ = std::move(alphabet);
    t.height_ = height;
    t.sparse_ = std::move(labels);
    return t;
}

FiniteTree FiniteTree::generate(AlphabetPtr alphabet, unsigned height,
                                const std::function<Symbol(const Position&)>& label) {
    const std::uint64_t n = full_tree_size(height);
    std::vector<Symbol> labels(n);
    for (std::uint64_t r = 0; r < n; ++r) labels[r] = label(Position::from_bfs_rank(r));
    return full(std::move(alphabet), height, std::move(labels));
}

namespace {

class LiteralParser {
public:
    LiteralParser(const Alphabet& alphabet, std::string_view text) : alphabet_(alphabet), text_(text) {}

    std::map<Position, Symbol> run() {
        std::map<Position, Symbol> out;
        node(Position::root(), out);
        skip();
        if (pos_ != text_.size()) fail("trailing characters");
        return out;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("tree literal: " + what, 1, pos_ + 1);
    }
    std::string token() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_) fail("expected a symbol");
        return std::string(text_.substr(start, pos_ - start));
    }
    // Returns false for an absent child "_".
    bool node(const Position& u, std::map<Position, Symbol>& out) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == '_') {
            ++pos_;
            return false;
        }
        if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('");
        ++pos_;
        std::string name = token();
        auto s = alphabet_.find(name);
        if (!s) fail("unknown symbol '" + name + "'");
        out[u] = *s;
        for (Direction d : {Direction::Left, Direction::Right}) {
            skip();
            if (pos_ < text_.size() && text_[pos_] == ')') break;
            node(u.child(d), out);
        }
        skip();
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
        ++pos_;
        return true;
    }

    const Alphabet& alphabet_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

FiniteTree FiniteTree::parse(AlphabetPtr alphabet, std::string_view literal) {
    auto labels = LiteralParser(*alphabet, literal).run();
    if (labels.empty()) throw InputError("tree literal: empty tree");
    return sparse(std::move(alphabet), std::move(labels));
}

bool FiniteTree::contains(const Position& u) const {
    if (full_) return u.depth() <= height_;
    return sparse_.count(u) != 0;
}

Symbol FiniteTree::label(const Position& u) const {
    if (full_) {
        if (u.depth() > height_) throw InputError("position " + u.to_string() + " outside tree");
        return dense_[u.bfs_rank()];
    }
    auto it = sparse_.find(u);
    if (it == sparse_.end()) throw InputError("position " + u.to_string() + " outside tree");
    return it->second;
}

std::size_t FiniteTree::node_count() const { return full_ ? dense_.size() : sparse_.size(); }

std::vector<Position> FiniteTree::positions() const {
    std::vector<Position> out;
    out.reserve(node_count());
    if (full_) {
        for (std::uint64_t r = 0; r < dense_.size(); ++r) out.push_back(Position::from_bfs_rank(r));
    } else {
        for (const auto& [u, s] : sparse_) out.push_back(u);
    }
    return out;
}

FiniteTree FiniteTree::subtree_at(const Position& u) const {
    if (!contains(u)) throw InputError("position " + u.to_string() + " outside tree");
    if (full_) {
        return generate(alphabet_, height_ - u.depth(),
                        [&](const Position& v) { return dense_[u.concat(v).bfs_rank()]; });
    }
    std::map<Position, Symbol> labels;
    for (const auto& [v, s] : sparse_)
        if (u.is_prefix_of(v)) labels.emplace(v.drop(u.depth()), s);
    return sparse(alphabet_, std::move(labels));
}

FiniteTree FiniteTree::restrict_to_depth(unsigned d) const {
    return generate(alphabet_, d, [&](const Position& v) { return label(v); });
}

void FiniteTree::write(std::string& out, const Position& u) const {
    out += '(';
    out += alphabet_->name(label(u));
    const bool has_left = u.depth() < Position::kMaxDepth && contains(u.left());
    const bool has_right = u.depth() < Position::kMaxDepth && contains(u.right());
    if (has_left || has_right) {
        out += ' ';
        if (has_left)
            write(out, u.left());
        else
            out += '_';
        if (has_right) {
            out += ' ';
            write(out, u.right());
        }
    }
    out += ')';
}

std::string FiniteTree::to_string() const {
    std::string out;
    write(out, Position::root());
    return out;
}

bool operator==(const FiniteTree& a, const FiniteTree& b) {
    if (!(*a.alphabet_ == *b.alphabet_) || a.node_count() != b.node_count()) return false;
    for (const auto& u : a.positions())
        if (!b.contains(u) || a.label(u) != b.label(u)) return false;
    return true;
}

FiniteTree restrict_to_depth(const FiniteTree& t, unsigned d) { return t.restrict_to_depth(d); }

FiniteTree restrict_to_depth(AlphabetPtr alphabet, const std::function<Symbol(const Position&)>& generator,
                             unsigned d) {
    return FiniteTree::generate(std::move(alphabet), d, generator);
}

FiniteTree subtree_at(const FiniteTree& t, const Position& u) { return t.subtree_at(u); }

Rational ball_measure(const FiniteTree& t) {
    return Rational(BigInt(1), power(t.alphabet()->size(), t.node_count()));
}

BigInt full_tree_count(std::size_t symbols, unsigned height) {
    if (height >= 40) throw ResourceError("tree height too large to count");
    return power(symbols, full_tree_size(height));
}

std::uint64_t checked_tree_count(std::size_t symbols, unsigned height, std::uint64_t budget) {
    if (height >= 40)
        throw BudgetError("enumeration infeasible: height " + std::to_string(height) + " is far beyond any budget",
                          "more than 2^(2^40)");
    const BigInt count = full_tree_count(symbols, height);
    if (count > BigInt(std::to_string(budget)))
        throw BudgetError("enumeration infeasible: " + count.get_str() + " full trees of height " +
                              std::to_string(height) + " over " + std::to_string(symbols) +
                              " symbols exceed the budget of " + std::to_string(budget),
                          count.get_str());
    return std::stoull(count.get_str());
}

FullTreeEnumerator::FullTreeEnumerator(AlphabetPtr alphabet, unsigned height, std::uint64_t budget)
    : alphabet_(std::move(alphabet)), height_(height) {
    count_ = checked_tree_count(alphabet_->size(), height, budget);
    nodes_ = full_tree_size(height);
}

void FullTreeEnumerator::labels_at(std::uint64_t index, std::vector<Symbol>& labels) const {
    const std::uint64_t k = alphabet_->size();
    labels.resize(nodes_);
    for (std::uint64_t r = nodes_; r-- > 0;) {
        labels[r] = static_cast<Symbol>(index % k);
        index /= k;
    }
}

FiniteTree FullTreeEnumerator::tree_at(std::uint64_t index) const {
    std::vector<Symbol> labels;
    labels_at(index, labels);
    return FiniteTree::full(alphabet_, height_, std::move(labels));
}

void FullTreeEnumerator::for_each(const std::function<void(const FiniteTree&)>& f) const {
    for (std::uint64_t i = 0; i < count_; ++i) f(tree_at(i));
}

std::vector<FiniteTree> enumerate_full_trees(AlphabetPtr alphabet, unsigned height, std::uint64_t budget) {
    FullTreeEnumerator e(std::move(alphabet), height, budget);
    std::vector<FiniteTree> out;
    out.reserve(e.count());
    e.for_each([&](const FiniteTree& t) { out.push_back(t); });
    return out;
}

}  // namespace treemeasure
