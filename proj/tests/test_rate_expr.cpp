#include <gtest/gtest.h>

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <stack>
#include <string>
#include <vector>

#include "nmwit/errors.hpp"
#include "nmwit/rate_expr.hpp"
#include "rate_corpus.hpp"

using nmwit::EvalError;
using nmwit::ParseError;
using nmwit::rate::RateExpression;

namespace {

// Independent table-driven evaluator: tokenize, shunting-yard to RPN, stack
// machine. Unary minus binds to its operand before '^'; returns nullopt
// whenever the library should raise an evaluation error.
class ShuntingYard {
public:
    static std::optional<double> eval(const std::string& src, double t) {
        std::vector<std::string> out;
        std::vector<std::string> ops;
        bool expect_operand = true;
        std::size_t i = 0;
        while (i < src.size()) {
            const char c = src[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t j = i;
                while (j < src.size() &&
                       (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
                    ++j;
                if (j < src.size() && (src[j] == 'e' || src[j] == 'E') && j + 1 < src.size() &&
                    (std::isdigit(static_cast<unsigned char>(src[j + 1])) ||
                     ((src[j + 1] == '+' || src[j + 1] == '-') && j + 2 < src.size() &&
                      std::isdigit(static_cast<unsigned char>(src[j + 2]))))) {
                    j += 2;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
                out.push_back(src.substr(i, j - i));
                i = j;
                expect_operand = false;
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
                const std::string id = src.substr(i, j - i);
                if (id == "t" || id == "pi" || id == "e") {
                    out.push_back(id);
                    expect_operand = false;
                } else {
                    ops.push_back(id);
                }
                i = j;
            } else if (c == '(') {
                ops.push_back("(");
                ++i;
                expect_operand = true;
            } else if (c == ')') {
                while (ops.back() != "(") {
                    out.push_back(ops.back());
                    ops.pop_back();
                }
                ops.pop_back();
                if (!ops.empty() && is_function(ops.back())) {
                    out.push_back(ops.back());
                    ops.pop_back();
                }
                ++i;
                expect_operand = false;
            } else {
                std::string op(1, c);
                if (c == '-' && expect_operand) op = "neg";
                while (!ops.empty() && ops.back() != "(" && !is_function(ops.back()) &&
                       pops_before(ops.back(), op))
                {
                    out.push_back(ops.back());
                    ops.pop_back();
                }
                ops.push_back(op);
                ++i;
                expect_operand = true;
            }
        }
        while (!ops.empty()) {
            out.push_back(ops.back());
            ops.pop_back();
        }
        return run(out, t);
    }

private:
    static bool is_function(const std::string& s) {
        return s == "sin" || s == "cos" || s == "exp" || s == "tanh" || s == "abs";
    }
    static int precedence(const std::string& op) {
        if (op == "+" || op == "-") return 1;
        if (op == "*" || op == "/") return 2;
        if (op == "^") return 3;
        return 4;  // neg
    }
    static bool right_assoc(const std::string& op) { return op == "^" || op == "neg"; }
    static bool pops_before(const std::string& top, const std::string& incoming) {
        if (incoming == "neg") return false;
        const int pt = precedence(top), pi = precedence(incoming);
        return right_assoc(incoming) ? pt > pi : pt >= pi;
    }

    static std::optional<double> run(const std::vector<std::string>& rpn, double t) {
        std::stack<double> st;
        for (const auto& tok : rpn) {
            if (tok == "t") {
                st.push(t);
            } else if (tok == "pi") {
                st.push(std::numbers::pi);
            } else if (tok == "e") {
                st.push(std::numbers::e);
            } else if (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.') {
                st.push(std::stod(tok));
            } else if (tok == "neg" || is_function(tok)) {
                const double a = st.top();
                st.pop();
                double r = 0.0;
                if (tok == "neg") r = -a;
                if (tok == "sin") r = std::sin(a);
                if (tok == "cos") r = std::cos(a);
                if (tok == "exp") r = std::exp(a);
                if (tok == "tanh") r = std::tanh(a);
                if (tok == "abs") r = std::abs(a);
                if (!std::isfinite(r)) return std::nullopt;
                st.push(r);
            } else {
                const double b = st.top();
                st.pop();
                const double a = st.top();
                st.pop();
                double r = 0.0;
                switch (tok[0]) {
                    case '+': r = a + b; break;
                    case '-': r = a - b; break;
                    case '*': r = a * b; break;
                    case '/':
                        if (b == 0.0) return std::nullopt;
                        r = a / b;
                        break;
                    default:
                        if (a == 0.0 && b < 0.0) return std::nullopt;
                        r = std::pow(a, b);
                }
                if (!std::isfinite(r)) return std::nullopt;
                st.push(r);
            }
        }
        return st.top();
    }
};

std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, 9);
    const int k = depth <= 0 ? pick(rng) % 4 : pick(rng);
    static const char* numbers[] = {"0.5", "2", "1.25", "3", "0.1", "7", "1e-1", "0"};
    static const char* funcs[] = {"sin", "cos", "exp", "tanh", "abs"};
    static const char* binops[] = {"+", "-", "*", "/", "^"};
    switch (k) {
        case 0: return numbers[rng() % 8];
        case 1: return "t";
        case 2: return rng() % 2 ? "pi" : "e";
        case 3: return "(" + random_expr(rng, depth - 1) + ")";
        case 4: return "-" + std::string(rng() % 2 ? "t" : "(" + random_expr(rng, depth - 1) + ")");
        case 5:
        case 6: return std::string(funcs[rng() % 5]) + "(" + random_expr(rng, depth - 1) + ")";
        default: {
            const char* op = binops[rng() % 5];
            return random_expr(rng, depth - 1) + " " + op + " " + random_expr(rng, depth - 1);
        }
    }
}

}  // namespace

TEST(RateExpr, GoldenCorpusEvaluates) {
    ASSERT_EQ(nmwit::test::kGolden.size(), 50u);
    for (const auto& g : nmwit::test::kGolden) {
        const auto e = RateExpression::parse(g.src);
        EXPECT_NEAR(e.eval(g.t), g.expected, 1e-12 * std::max(1.0, std::abs(g.expected))) << g.src;
    }
}

TEST(RateExpr, PrettyPrintRoundTripIsFixedPoint) {
    for (const auto& g : nmwit::test::kGolden) {
        const auto e = RateExpression::parse(g.src);
        const auto again = RateExpression::parse(e.to_string());
        EXPECT_EQ(e, again) << g.src << " -> " << e.to_string();
        EXPECT_EQ(again.to_string(), e.to_string());
    }
}

TEST(RateExpr, AgreesWithShuntingYardOracle) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> tdist(-3.0, 3.0);
    std::size_t compared = 0;
    for (int n = 0; n < 1000; ++n) {
        const std::string src = random_expr(rng, 4);
        const auto e = RateExpression::parse(src);
        for (int k = 0; k < 10; ++k) {
            const double t = tdist(rng);
            const auto expected = ShuntingYard::eval(src, t);
            if (!expected) {
                EXPECT_THROW(e.eval(t), EvalError) << src << " at t=" << t;
                continue;
            }
            const double got = e.eval(t);
            EXPECT_NEAR(got, *expected, 1e-12 * std::max(1.0, std::abs(*expected)))
                << src << " at t=" << t;
            ++compared;
        }
    }
    EXPECT_GT(compared, 5000u);
}

TEST(RateExpr, EvaluationErrors) {
    EXPECT_THROW(RateExpression::parse("sin(t)/t").eval(0.0), EvalError);
    EXPECT_THROW(RateExpression::parse("0^-1").eval(0.0), EvalError);
    EXPECT_THROW(RateExpression::parse("exp(1000)").eval(0.0), EvalError);
    EXPECT_NO_THROW(RateExpression::parse("sin(t)/t").eval(1.0));
}

TEST(RateExpr, MalformedInputsCarryOffsets) {
    for (const auto& b : nmwit::test::kMalformed) {
        try {
            RateExpression::parse(b.src);
            ADD_FAILURE() << "accepted: '" << b.src << "'";
        } catch (const ParseError& err) {
            EXPECT_EQ(err.offset, b.offset) << b.src << ": " << err.what();
            EXPECT_NE(std::string(err.what()).find("offset"), std::string::npos);
        }
    }
}

TEST(RateExpr, RandomGarbageNeverCrashes) {
    std::mt19937_64 rng(7);
    const std::string alphabet = "t+-*/^()., 0123456789esinpxa";
    for (int n = 0; n < 5000; ++n) {
        std::string s(rng() % 20, ' ');
        for (char& c : s) c = alphabet[rng() % alphabet.size()];
        try {
            const auto e = RateExpression::parse(s);
            try {
                (void)e.eval(0.5);
            } catch (const EvalError&) {
            }
        } catch (const ParseError& err) {
            EXPECT_LE(err.offset, s.size());
        }
    }
}

TEST(RateExpr, DeepNestingIsRejectedNotOverflowed) {
    const std::string deep = std::string(100000, '(') + "1" + std::string(100000, ')');
    EXPECT_THROW(RateExpression::parse(deep), ParseError);
    const std::string chain = "2" + std::string(3000, '^') ;
    EXPECT_THROW(RateExpression::parse(chain), ParseError);
    std::string pow_chain = "1";
    for (int k = 0; k < 150; ++k) pow_chain += "^1";
    EXPECT_DOUBLE_EQ(RateExpression::parse(pow_chain).eval(0.0), 1.0);
}
