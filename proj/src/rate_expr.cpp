#include "nmwit/rate_expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "nmwit/errors.hpp"

namespace nmwit::rate {

namespace {

using NodePtr = std::shared_ptr<const Node>;

constexpr std::array<std::string_view, 5> kFunctions = {"sin", "cos", "exp", "tanh", "abs"};
constexpr int kMaxDepth = 200;
constexpr std::size_t kMaxLength = 4096;

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, End };
    Kind kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            // exponent only if digits follow, so "2e" stays "2" followed by ident "e"
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    i = j;
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                }
            }
            const std::string_view text = src.substr(start, i - start);
            if (text == ".") throw ParseError(start, "malformed number '.'");
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
                throw ParseError(start, "malformed number '" + std::string(text) + "'");
            }
            out.push_back({Token::Kind::Number, start, text, value});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            out.push_back({Token::Kind::Ident, start, src.substr(start, i - start)});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({Token::Kind::Op, start, src.substr(start, 1)});
            ++i;
        } else if (c == '(') {
            out.push_back({Token::Kind::LParen, start, src.substr(start, 1)});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::Kind::RParen, start, src.substr(start, 1)});
            ++i;
        } else {
            throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::Kind::End, src.size(), {}});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        if (peek().kind != Token::Kind::End) {
            const Token& t = peek();
            if (t.kind == Token::Kind::RParen) throw ParseError(t.offset, "unbalanced ')'");
            throw ParseError(t.offset, "unexpected trailing token '" + std::string(t.text) + "'");
        }
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }
    bool peek_op(char op) const {
        return peek().kind == Token::Kind::Op && peek().text[0] == op;
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p(p) {
            if (++p.depth_ > kMaxDepth) throw ParseError(p.peek().offset, "expression nested too deeply");
        }
        ~DepthGuard() { --p.depth_; }
        Parser& p;
    };

    static NodePtr binary(char op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Binary;
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr() {
        DepthGuard guard(*this);
        NodePtr lhs = term();
        while (peek_op('+') || peek_op('-')) {
            const char op = next().text[0];
            lhs = binary(op, lhs, term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (peek_op('*') || peek_op('/')) {
            const char op = next().text[0];
            lhs = binary(op, lhs, factor());
        }
        return lhs;
    }

    NodePtr factor() {
        DepthGuard guard(*this);
        NodePtr base = unary();
        if (peek_op('^')) {
            next();
            return binary('^', base, factor());
        }
        return base;
    }

    NodePtr unary() {
        if (peek_op('-')) {
            next();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Negate;
            n->lhs = atom();
            return n;
        }
        return atom();
    }

    NodePtr atom() {
        const Token& tok = next();
        switch (tok.kind) {
            case Token::Kind::Number: {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Number;
                n->value = tok.number;
                return n;
            }
            case Token::Kind::Ident: return identifier(tok);
            case Token::Kind::LParen: {
                NodePtr inner = expr();
                if (peek().kind != Token::Kind::RParen)
                    throw ParseError(peek().offset, "expected ')' to close '(' at offset " +
                                                        std::to_string(tok.offset));
                next();
                return inner;
            }
            case Token::Kind::RParen: throw ParseError(tok.offset, "unbalanced ')'");
            case Token::Kind::End: throw ParseError(tok.offset, "unexpected end of expression");
            case Token::Kind::Op:
                throw ParseError(tok.offset, "unexpected operator '" + std::string(tok.text) + "'");
        }
        throw ParseError(tok.offset, "unreachable");
    }

    NodePtr identifier(const Token& tok) {
        auto n = std::make_shared<Node>();
        if (tok.text == "t") {
            n->kind = Node::Kind::Variable;
            return n;
        }
        if (tok.text == "pi" || tok.text == "e") {
            n->kind = Node::Kind::Constant;
            n->name = std::string(tok.text);
            n->value = tok.text == "pi" ? std::numbers::pi : std::numbers::e;
            return n;
        }
        for (std::string_view fn : kFunctions) {
            if (tok.text != fn) continue;
            if (peek().kind != Token::Kind::LParen)
                throw ParseError(peek().offset, "expected '(' after function '" + std::string(fn) + "'");
            const std::size_t open = next().offset;
            n->kind = Node::Kind::Call;
            n->name = std::string(fn);
            n->lhs = expr();
            if (peek().kind != Token::Kind::RParen)
                throw ParseError(peek().offset,
                                 "expected ')' to close '(' at offset " + std::to_string(open));
            next();
            return n;
        }
        throw ParseError(tok.offset, "unknown identifier '" + std::string(tok.text) + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
}

double evaluate(const Node& n, double t) {
    switch (n.kind) {
        case Node::Kind::Number:
        case Node::Kind::Constant: return n.value;
        case Node::Kind::Variable: return t;
        case Node::Kind::Negate: return -evaluate(*n.lhs, t);
        case Node::Kind::Call: {
            const double x = evaluate(*n.lhs, t);
            if (n.name == "sin") return std::sin(x);
            if (n.name == "cos") return std::cos(x);
            if (n.name == "exp") return checked(std::exp(x), "exp");
            if (n.name == "tanh") return std::tanh(x);
            return std::abs(x);
        }
        case Node::Kind::Binary: {
            const double a = evaluate(*n.lhs, t);
            const double b = evaluate(*n.rhs, t);
            switch (n.op) {
                case '+': return checked(a + b, "'+'");
                case '-': return checked(a - b, "'-'");
                case '*': return checked(a * b, "'*'");
                case '/':
                    if (b == 0.0) throw EvalError("division by zero");
                    return checked(a / b, "'/'");
                default:
                    if (a == 0.0 && b < 0.0) throw EvalError("zero raised to a negative power");
                    return checked(std::pow(a, b), "'^'");
            }
        }
    }
    return 0.0;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_atomic(const Node& n) {
    return n.kind == Node::Kind::Number || n.kind == Node::Kind::Variable ||
           n.kind == Node::Kind::Constant || n.kind == Node::Kind::Call;
}

void render(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Number: out += format_number(n.value); break;
        case Node::Kind::Variable: out += 't'; break;
        case Node::Kind::Constant: out += n.name; break;
        case Node::Kind::Call:
            out += n.name;
            out += '(';
            render(*n.lhs, out);
            out += ')';
            break;
        case Node::Kind::Negate:
            out += '-';
            if (is_atomic(*n.lhs)) {
                render(*n.lhs, out);
            } else {
                out += '(';
                render(*n.lhs, out);
                out += ')';
            }
            break;
        case Node::Kind::Binary:
            // Fully parenthesized; a Negate left operand of '^' is already a unary.
            out += '(';
            render(*n.lhs, out);
            out += n.op;
            render(*n.rhs, out);
            out += ')';
            break;
    }
}

}  // namespace

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Number: return a.value == b.value;
        case Node::Kind::Variable: return true;
        case Node::Kind::Constant: return a.name == b.name;
        case Node::Kind::Negate: return same_tree(*a.lhs, *b.lhs);
        case Node::Kind::Call: return a.name == b.name && same_tree(*a.lhs, *b.lhs);
        case Node::Kind::Binary:
            return a.op == b.op && same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
    }
    return false;
}

RateExpression RateExpression::parse(std::string_view src) {
    if (src.size() > kMaxLength) throw ParseError(kMaxLength, "expression too long");
    RateExpression e;
    e.source_ = std::string(src);
    e.root_ = Parser(tokenize(src)).parse_all();
    return e;
}

double RateExpression::eval(double t) const { return evaluate(*root_, t); }

std::string RateExpression::to_string() const {
    std::string out;
    render(*root_, out);
    return out;
}

}  // namespace nmwit::rate
