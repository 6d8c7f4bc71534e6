#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace treemeasure {

/// S-expression node: a symbol, a double-quoted string, or a list.
struct SExpr {
    enum class Kind { Symbol, String, List };

    Kind kind = Kind::List;
    std::string text;
    std::vector<SExpr> items;
    std::size_t line = 0;
    std::size_t column = 0;

    bool is_symbol() const noexcept { return kind == Kind::Symbol; }
    bool is_symbol(std::string_view s) const noexcept { return kind == Kind::Symbol && text == s; }
    bool is_list() const noexcept { return kind == Kind::List; }
    /// Head symbol of a non-empty list, or "".
    std::string_view head() const noexcept;

    std::string to_string() const;
};

/// Reads every top-level expression. `;` starts a comment to end of line.
/// `first_line` shifts reported line numbers when the text is part of a larger file.
std::vector<SExpr> parse_sexprs(std::string_view text, std::size_t first_line = 1);

/// A file made of an `alphabet: a b ...` header line followed by s-expressions.
struct HeaderedSource {
    std::vector<std::string> alphabet;
    std::vector<SExpr> body;
};

/// Lines before the first '(' may be blank, `;` comments, or the alphabet header.
HeaderedSource parse_headered(std::string_view text);

/// Throws InputError at the node's location.
[[noreturn]] void fail_at(const SExpr& node, const std::string& message);

}  // namespace treemeasure
