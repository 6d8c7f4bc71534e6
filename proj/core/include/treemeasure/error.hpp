#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treemeasure {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or ill-typed input. Carries a 1-based source location when the
/// input came from a file (line 0 means "no location").
class InputError : public Error {
public:
    explicit InputError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

/// An exhaustive enumeration would exceed the configured budget.
/// `required` is the exact number of items as a decimal string.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, std::string required);

    const std::string& required() const noexcept { return required_; }

private:
    std::string required_;
};

/// A computation outgrew a memory/size limit (distribution support, bit length, emission bound).
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace treemeasure
