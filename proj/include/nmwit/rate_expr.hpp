// rate_expr.hpp: expression language for time-dependent rates Gamma(t)
//
// Grammar (whitespace ignored, '^' right-associative):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-'? atom
//   atom   := number | 't' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
// Functions: sin cos exp tanh abs. No implicit multiplication.

#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace nmwit::rate {

struct Node {
    enum class Kind { Number, Variable, Constant, Negate, Binary, Call };

    Kind kind = Kind::Number;
    double value = 0.0;  // Number and Constant
    char op = 0;         // Binary: one of + - * / ^
    std::string name;    // Constant or Call
    std::shared_ptr<const Node> lhs;  // Negate/Call operand, Binary left
    std::shared_ptr<const Node> rhs;  // Binary right
};

bool same_tree(const Node& a, const Node& b);

class RateExpression {
public:
    // Throws ParseError carrying the byte offset of the offending token.
    static RateExpression parse(std::string_view src);

    // Throws EvalError on division by zero, 0^negative, or a non-finite result.
    double eval(double t) const;

    // Re-parseable rendering; parse(to_string()) yields the same tree.
    std::string to_string() const;

    const std::string& source() const { return source_; }
    const Node& root() const { return *root_; }

    friend bool operator==(const RateExpression& a, const RateExpression& b) {
        return same_tree(*a.root_, *b.root_);
    }

private:
    std::string source_;
    std::shared_ptr<const Node> root_;
};

}  // namespace nmwit::rate
