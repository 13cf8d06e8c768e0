#include "tscalc/exprlang.hpp"

#include "tscalc/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace tscalc::expr {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(src[i + 1]))) {
            while (i < n && is_digit(src[i])) ++i;
            if (i < n && src[i] == '.') {
                ++i;
                while (i < n && is_digit(src[i])) ++i;
            }
            // Exponent only when digits follow; otherwise 'e' starts the next token.
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && is_digit(src[j])) {
                    i = j;
                    while (i < n && is_digit(src[i])) ++i;
                }
            }
            out.push_back({TokenKind::Number, std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (is_ident_start(c)) {
            while (i < n && is_ident_char(src[i])) ++i;
            out.push_back({TokenKind::Identifier, std::string(src.substr(start, i - start)), start});
            continue;
        }
        switch (c) {
        case '+': case '-': case '*': case '/': case '^':
            out.push_back({TokenKind::Operator, std::string(1, c), start});
            break;
        case '(': out.push_back({TokenKind::LParen, "(", start}); break;
        case ')': out.push_back({TokenKind::RParen, ")", start}); break;
        case ',': out.push_back({TokenKind::Comma, ",", start}); break;
        default: {
            std::string shown = std::isprint(static_cast<unsigned char>(c))
                                    ? std::string("'") + c + "'"
                                    : "byte 0x" + [&] {
                                          std::ostringstream os;
                                          os << std::hex << (static_cast<unsigned>(static_cast<unsigned char>(c)));
                                          return os.str();
                                      }();
            throw LexError(start, "illegal character " + shown);
        }
        }
        ++i;
    }
    return out;
}

// ---------------------------------------------------------------------------

const char* var_name(Var v) {
    switch (v) {
    case Var::T: return "t";
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::U: return "u";
    case Var::V: return "v";
    }
    return "?";
}

namespace {

std::optional<Var> lookup_var(std::string_view s) {
    if (s == "t") return Var::T;
    if (s == "x") return Var::X;
    if (s == "y") return Var::Y;
    if (s == "u") return Var::U;
    if (s == "v") return Var::V;
    return std::nullopt;
}

struct FuncInfo {
    const char* name;
    Func func;
    std::size_t arity;
};

constexpr FuncInfo kFuncs[] = {
    {"exp", Func::Exp, 1}, {"log", Func::Log, 1}, {"sqrt", Func::Sqrt, 1}, {"abs", Func::Abs, 1},
    {"min", Func::Min, 2}, {"max", Func::Max, 2}, {"pow", Func::Pow, 2},
};

const FuncInfo* lookup_func(std::string_view s) {
    for (const auto& f : kFuncs)
        if (s == f.name) return &f;
    return nullptr;
}

const FuncInfo& func_info(Func f) {
    for (const auto& fi : kFuncs)
        if (fi.func == f) return fi;
    return kFuncs[0];
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
public:
    Parser(const std::vector<Token>& toks, std::size_t source_length) : toks_(toks), end_(source_length) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        if (pos_ < toks_.size()) fail("unexpected '" + toks_[pos_].text + "' after complete expression");
        return e;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t end_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    static constexpr int kMaxDepth = 256;

    const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }
    std::size_t here() const { return pos_ < toks_.size() ? toks_[pos_].position : end_; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(here(), msg); }

    bool at_op(char c) const {
        const Token* t = peek();
        return t && t->kind == TokenKind::Operator && t->text[0] == c;
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) p.fail("expression nested too deeply");
        }
        ~DepthGuard() { --p.depth_; }
    };

    NodePtr binary(BinaryOp op, NodePtr l, NodePtr r, std::size_t at) {
        Node n;
        n.kind = Node::Kind::Binary;
        n.op = op;
        n.args = {std::move(l), std::move(r)};
        n.position = at;
        return make(std::move(n));
    }

    NodePtr expr() {
        DepthGuard g(*this);
        NodePtr lhs = term();
        while (at_op('+') || at_op('-')) {
            const Token& t = toks_[pos_++];
            lhs = binary(t.text[0] == '+' ? BinaryOp::Add : BinaryOp::Sub, lhs, term(), t.position);
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (at_op('*') || at_op('/')) {
            const Token& t = toks_[pos_++];
            lhs = binary(t.text[0] == '*' ? BinaryOp::Mul : BinaryOp::Div, lhs, unary(), t.position);
        }
        return lhs;
    }

    NodePtr unary() {
        DepthGuard g(*this);
        if (at_op('-')) {
            const std::size_t at = toks_[pos_++].position;
            Node n;
            n.kind = Node::Kind::Negate;
            n.args = {unary()};
            n.position = at;
            return make(std::move(n));
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (at_op('^')) {
            const std::size_t at = toks_[pos_++].position;
            return binary(BinaryOp::Pow, base, unary(), at);
        }
        return base;
    }

    NodePtr primary() {
        const Token* t = peek();
        if (!t) fail("expected operand at end of input");
        switch (t->kind) {
        case TokenKind::Number: {
            double v = 0;
            const char* first = t->text.data();
            const char* last = first + t->text.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail("malformed number '" + t->text + "'");
            Node n;
            n.kind = Node::Kind::Constant;
            n.value = v;
            n.position = t->position;
            ++pos_;
            return make(std::move(n));
        }
        case TokenKind::Identifier: {
            const std::size_t at = t->position;
            if (const FuncInfo* fi = lookup_func(t->text)) {
                ++pos_;
                if (!peek() || peek()->kind != TokenKind::LParen) fail(std::string("expected '(' after ") + fi->name);
                ++pos_;
                Node n;
                n.kind = Node::Kind::Call;
                n.func = fi->func;
                n.position = at;
                n.args.push_back(expr());
                while (peek() && peek()->kind == TokenKind::Comma) {
                    ++pos_;
                    n.args.push_back(expr());
                }
                if (!peek() || peek()->kind != TokenKind::RParen) fail("expected ')' to close call");
                ++pos_;
                if (n.args.size() != fi->arity)
                    throw ParseError(at, std::string(fi->name) + " takes " + std::to_string(fi->arity) +
                                             " argument(s), got " + std::to_string(n.args.size()));
                return make(std::move(n));
            }
            if (auto v = lookup_var(t->text)) {
                Node n;
                n.kind = Node::Kind::Variable;
                n.var = *v;
                n.position = at;
                ++pos_;
                return make(std::move(n));
            }
            fail("unknown identifier '" + t->text + "'");
        }
        case TokenKind::LParen: {
            ++pos_;
            NodePtr inner = expr();
            if (!peek() || peek()->kind != TokenKind::RParen) fail("expected ')'");
            ++pos_;
            return inner;
        }
        case TokenKind::RParen: fail("expected operand, found ')'");
        case TokenKind::Comma: fail("expected operand, found ','");
        case TokenKind::Operator: fail("expected operand, found '" + t->text + "'");
        }
        fail("expected operand");
    }
};

}  // namespace

Expr parse(const std::vector<Token>& tokens, std::size_t source_length) {
    Parser p(tokens, source_length);
    return Expr(p.parse_all());
}

Expr compile(std::string_view src) {
    const auto toks = tokenize(src);
    Parser p(toks, src.size());
    return Expr(p.parse_all(), std::string(src));
}

// ---------------------------------------------------------------------------

namespace {

const char* op_symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
    }
    return "?";
}

std::string node_label(const Node& n) {
    std::string label;
    switch (n.kind) {
    case Node::Kind::Binary: label = std::string("'") + op_symbol(n.op) + "'"; break;
    case Node::Kind::Call: label = func_info(n.func).name; break;
    case Node::Kind::Negate: label = "negation"; break;
    case Node::Kind::Variable: label = var_name(n.var); break;
    case Node::Kind::Constant: label = "constant"; break;
    }
    return label + " at position " + std::to_string(n.position);
}

[[noreturn]] void eval_fail(const Node& n, const std::string& what) {
    throw EvalError(what + " in " + node_label(n));
}

double checked(const Node& n, double v) {
    if (!std::isfinite(v)) eval_fail(n, "non-finite result");
    return v;
}

double eval_node(const Node& n, const Bindings& b) {
    switch (n.kind) {
    case Node::Kind::Constant: return n.value;
    case Node::Kind::Variable: {
        auto v = b.get(n.var);
        if (!v) eval_fail(n, std::string("unbound variable '") + var_name(n.var) + "'");
        return *v;
    }
    case Node::Kind::Negate: return -eval_node(*n.args[0], b);
    case Node::Kind::Binary: {
        const double l = eval_node(*n.args[0], b);
        const double r = eval_node(*n.args[1], b);
        switch (n.op) {
        case BinaryOp::Add: return checked(n, l + r);
        case BinaryOp::Sub: return checked(n, l - r);
        case BinaryOp::Mul: return checked(n, l * r);
        case BinaryOp::Div:
            if (r == 0.0) eval_fail(n, "division by zero");
            return checked(n, l / r);
        case BinaryOp::Pow:
            if (l < 0 && r != std::floor(r)) eval_fail(n, "negative base with non-integer exponent");
            if (l == 0 && r < 0) eval_fail(n, "zero raised to a negative power");
            return checked(n, std::pow(l, r));
        }
        break;
    }
    case Node::Kind::Call: {
        const double a0 = eval_node(*n.args[0], b);
        switch (n.func) {
        case Func::Exp: return checked(n, std::exp(a0));
        case Func::Log:
            if (!(a0 > 0)) eval_fail(n, "log of a nonpositive value");
            return checked(n, std::log(a0));
        case Func::Sqrt:
            if (a0 < 0) eval_fail(n, "sqrt of a negative value");
            return std::sqrt(a0);
        case Func::Abs: return std::abs(a0);
        case Func::Min: return std::min(a0, eval_node(*n.args[1], b));
        case Func::Max: return std::max(a0, eval_node(*n.args[1], b));
        case Func::Pow: {
            const double a1 = eval_node(*n.args[1], b);
            if (a0 < 0 && a1 != std::floor(a1)) eval_fail(n, "negative base with non-integer exponent");
            if (a0 == 0 && a1 < 0) eval_fail(n, "zero raised to a negative power");
            return checked(n, std::pow(a0, a1));
        }
        }
        break;
    }
    }
    eval_fail(n, "malformed node");
}

void collect_vars(const Node& n, std::set<Var>& out) {
    if (n.kind == Node::Kind::Variable) out.insert(n.var);
    for (const auto& a : n.args) collect_vars(*a, out);
}

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

double Expr::eval(const Bindings& b) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, b);
}

std::vector<Var> Expr::free_variables() const {
    std::set<Var> s;
    if (root_) collect_vars(*root_, s);
    return {s.begin(), s.end()};
}

std::string to_string(const Node& n) {
    switch (n.kind) {
    case Node::Kind::Constant: return format_number(n.value);
    case Node::Kind::Variable: return var_name(n.var);
    case Node::Kind::Negate: return "(-" + to_string(*n.args[0]) + ")";
    case Node::Kind::Binary:
        return "(" + to_string(*n.args[0]) + " " + op_symbol(n.op) + " " + to_string(*n.args[1]) + ")";
    case Node::Kind::Call: {
        std::string s = std::string(func_info(n.func).name) + "(";
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) s += ", ";
            s += to_string(*n.args[i]);
        }
        return s + ")";
    }
    }
    return "?";
}

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    switch (a.kind) {
    case Node::Kind::Constant:
        if (a.value != b.value) return false;
        break;
    case Node::Kind::Variable:
        if (a.var != b.var) return false;
        break;
    case Node::Kind::Binary:
        if (a.op != b.op) return false;
        break;
    case Node::Kind::Call:
        if (a.func != b.func) return false;
        break;
    case Node::Kind::Negate: break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_tree(*a.args[i], *b.args[i])) return false;
    return true;
}

}  // namespace tscalc::expr
