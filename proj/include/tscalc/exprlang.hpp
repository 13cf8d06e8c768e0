#pragma once

/**
 * @file exprlang.hpp
 * @brief Small arithmetic language for user-supplied fields.
 *
 * Grammar (lowest to highest precedence):
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' unary)?          right-associative
 *   primary := number | variable | call | '(' expr ')'
 *   call    := name '(' expr (',' expr)* ')'
 *
 * Variables: t, x, y, u, v. Functions: exp, log, sqrt, abs (1 arg), pow, min, max (2 args).
 * No implicit multiplication: "2t" is a parse error.
 */

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tscalc::expr {

enum class TokenKind { Number, Identifier, Operator, LParen, RParen, Comma };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t position;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Throws LexError (with byte offset) on an illegal character.
std::vector<Token> tokenize(std::string_view src);

enum class Var { T, X, Y, U, V };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Log, Sqrt, Abs, Min, Max, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Constant, Variable, Negate, Binary, Call };

    Kind kind = Kind::Constant;
    double value = 0.0;      // Constant
    Var var = Var::T;        // Variable
    BinaryOp op = BinaryOp::Add;
    Func func = Func::Exp;
    std::vector<NodePtr> args;  // operands (1 for Negate, 2 for Binary, arity for Call)
    std::size_t position = 0;
};

/// Variable values; unbound entries are nullopt.
class Bindings {
public:
    Bindings& set(Var v, double value) {
        slots_[static_cast<std::size_t>(v)] = value;
        return *this;
    }
    std::optional<double> get(Var v) const { return slots_[static_cast<std::size_t>(v)]; }

private:
    std::array<std::optional<double>, 5> slots_{};
};

class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root, std::string source = {}) : root_(std::move(root)), source_(std::move(source)) {}

    const Node& root() const { return *root_; }
    const std::string& source() const noexcept { return source_; }
    bool empty() const noexcept { return !root_; }

    /// Throws EvalError on unbound variables and domain faults.
    double eval(const Bindings& b) const;
    double operator()(double t) const { return eval(Bindings().set(Var::T, t)); }

    /// Variables referenced anywhere in the tree.
    std::vector<Var> free_variables() const;

private:
    NodePtr root_;
    std::string source_;
};

/// Throws ParseError (with byte offset) on malformed input.
Expr parse(const std::vector<Token>& tokens, std::size_t source_length);

/// tokenize + parse.
Expr compile(std::string_view src);

/// Fully parenthesized rendering that reparses to the same tree.
std::string to_string(const Node& n);
inline std::string to_string(const Expr& e) { return to_string(e.root()); }

/// Structural equality, ignoring source positions.
bool same_tree(const Node& a, const Node& b);

const char* var_name(Var v);

}  // namespace tscalc::expr
