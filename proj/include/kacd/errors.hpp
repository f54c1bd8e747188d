#ifndef KACD_ERRORS_HPP_
#define KACD_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kacd {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed term/word/valuation text.
struct SyntaxError : Error {
    std::size_t position;
    std::string expected;

    SyntaxError(std::size_t pos, const std::string& expected_tokens)
        : Error("syntax error at position " + std::to_string(pos) + ": expected " + expected_tokens),
          position(pos),
          expected(expected_tokens) {}
};

/// A complement form is not available in the requested fragment.
struct FragmentError : Error {
    explicit FragmentError(const std::string& msg) : Error(msg) {}
};

struct AlphabetMismatch : Error {
    explicit AlphabetMismatch(const std::string& msg) : Error(msg) {}
};

struct UnknownSymbol : Error {
    explicit UnknownSymbol(const std::string& symbol)
        : Error("symbol '" + symbol + "' is not in the alphabet") {}
};

struct NotStarFree : Error {
    explicit NotStarFree(const std::string& msg) : Error(msg) {}
};

struct MissingVariable : Error {
    explicit MissingVariable(const std::string& var)
        : Error("profile has no entry for variable '" + var + "'") {}
};

struct NonEmptyRequired : Error {
    explicit NonEmptyRequired(const std::string& msg) : Error(msg) {}
};

struct NotASubset : Error {
    explicit NotASubset(const std::string& msg) : Error(msg) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

/// Internal-consistency guard of the refutation builders; must never fire.
struct NotActuallyDistinct : Error {
    explicit NotActuallyDistinct(const std::string& msg) : Error(msg) {}
};

/// Bad valuation file or other malformed structured input.
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

}  // namespace kacd

#endif  // KACD_ERRORS_HPP_
