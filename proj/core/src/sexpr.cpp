#include "treemeasure/sexpr.hpp"

#include "treemeasure/error.hpp"

#include <algorithm>
#include <cctype>

namespace treemeasure {

std::string_view SExpr::head() const noexcept {
    if (kind != Kind::List || items.empty() || !items.front().is_symbol()) return {};
    return items.front().text;
}

std::string SExpr::to_string() const {
    switch (kind) {
        case Kind::Symbol:
            return text;
        case Kind::String:
            return "\"" + text + "\"";
        case Kind::List: {
            std::string out = "(";
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out += ' ';
                out += items[i].to_string();
            }
            return out + ")";
        }
    }
    return {};
}

namespace {

class Reader {
public:
    Reader(std::string_view text, std::size_t first_line) : text_(text), line_(first_line) {}

    std::vector<SExpr> all() {
        std::vector<SExpr> out;
        for (skip(); pos_ < text_.size(); skip()) out.push_back(read());
        return out;
    }

private:
    char peek() const { return text_[pos_]; }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else if (peek() == ';') {
                while (pos_ < text_.size() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }
    SExpr read() {
        SExpr node;
        node.line = line_;
        node.column = col_;
        if (peek() == ')') throw InputError("unexpected ')'", line_, col_);
        if (peek() == '(') {
            advance();
            node.kind = SExpr::Kind::List;
            for (skip(); pos_ < text_.size() && peek() != ')'; skip()) node.items.push_back(read());
            if (pos_ >= text_.size()) throw InputError("unterminated list", node.line, node.column);
            advance();
        } else if (peek() == '"') {
            advance();
            node.kind = SExpr::Kind::String;
            while (pos_ < text_.size() && peek() != '"') {
                node.text += peek();
                advance();
            }
            if (pos_ >= text_.size()) throw InputError("unterminated string", node.line, node.column);
            advance();
        } else {
            node.kind = SExpr::Kind::Symbol;
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '(' &&
                   peek() != ')' && peek() != ';') {
                node.text += peek();
                advance();
            }
        }
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t col_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text, std::size_t first_line) {
    return Reader(text, first_line).all();
}

HeaderedSource parse_headered(std::string_view text) {
    HeaderedSource out;
    bool seen = false;
    std::size_t pos = 0, line = 1;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view row = text.substr(pos, end - pos);
        const auto first = row.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && row[first] == '(') break;
        if (first != std::string_view::npos && row[first] != ';') {
            const auto colon = row.find(':');
            if (colon == std::string_view::npos || row.substr(first, colon - first) != "alphabet")
                throw InputError("expected 'alphabet:' header", line, first + 1);
            std::string words(row.substr(colon + 1));
            std::size_t i = 0;
            while (i < words.size()) {
                while (i < words.size() && std::isspace(static_cast<unsigned char>(words[i]))) ++i;
                std::size_t j = i;
                while (j < words.size() && !std::isspace(static_cast<unsigned char>(words[j])) && words[j] != ';') ++j;
                if (j > i) out.alphabet.push_back(words.substr(i, j - i));
                if (j < words.size() && words[j] == ';') break;
                i = j;
            }
            seen = true;
        }
        pos = end + 1;
        ++line;
    }
    if (!seen) throw InputError("missing 'alphabet:' header");
    if (pos < text.size()) out.body = parse_sexprs(text.substr(pos), line);
    return out;
}

void fail_at(const SExpr& node, const std::string& message) {
    throw InputError(message, node.line, node.column);
}

}  // namespace treemeasure
