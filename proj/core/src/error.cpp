#include "treemeasure/error.hpp"

#include <utility>

namespace treemeasure {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

}  // namespace

InputError::InputError(const std::string& message, std::size_t line, std::size_t column)
    : Error(located(message, line, column)), message_(message), line_(line), column_(column) {}

BudgetError::BudgetError(const std::string& what, std::string required)
    : Error(what), required_(std::move(required)) {}

}  // namespace treemeasure
