#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tscalc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad interval list, a > b, nonpositive weight, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the set an operation is defined on (t not in T, t not in T^kappa, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// G(y) vanished where the Hardy dual construction divides by it.
class DegenerateKernelError : public Error {
public:
    using Error::Error;
};

/// Lexing or parsing failure in the expression language. `position` is a byte offset.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error("at position " + std::to_string(position) + ": " + message),
          position_(position), detail_(message) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
};

class LexError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

class ParseError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// Runtime fault while evaluating an expression (division by zero, log of a negative, ...).
class EvalError : public Error {
public:
    using Error::Error;
};

}  // namespace tscalc
