#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace nmwit::test {

struct Golden {
    const char* src;
    double t;
    double expected;
};

inline const double kPi = std::numbers::pi;
inline const double kE = std::numbers::e;

inline const std::vector<Golden> kGolden = {
    {"1.5", 0, 1.5},
    {"-tanh(t)", 0, 0.0},
    {"cos(2*t) + 0.5", 0, 1.5},
    {"2^3^2", 0, 512},
    {"1 - 2*t", 0.25, 0.5},
    {"t", 3.5, 3.5},
    {"-t", 3.5, -3.5},
    {"pi", 0, kPi},
    {"e", 0, kE},
    {"2*pi*t", 0.5, kPi},
    {"sin(pi/2)", 0, 1.0},
    {"cos(pi)", 0, -1.0},
    {"exp(1)", 0, kE},
    {"exp(-t)", 1, 1.0 / kE},
    {"abs(-3.25)", 0, 3.25},
    {"tanh(0)", 0, 0.0},
    {"1 + 2 * 3", 0, 7},
    {"(1 + 2) * 3", 0, 9},
    {"10 - 4 - 3", 0, 3},
    {"64 / 4 / 2", 0, 8},
    {"2 ^ -1", 0, 0.5},
    {"-2 ^ 2", 0, 4},
    {"-(2 ^ 2)", 0, -4},
    {"2 * -3", 0, -6},
    {"1 - -1", 0, 2},
    {"1e3", 0, 1000},
    {"2.5E-1", 0, 0.25},
    {".5 + .25", 0, 0.75},
    {"3.", 0, 3.0},
    {"  4 *   t  ", 2, 8},
    {"t^2 - 2*t + 1", 3, 4},
    {"(t - 1)^2", 3, 4},
    {"sin(t)^2 + cos(t)^2", 0.37, 1.0},
    {"exp(t) * exp(-t)", 1.7, 1.0},
    {"1 / (1 + exp(-t))", 0, 0.5},
    {"abs(sin(t))", -kPi / 6, 0.5},
    {"tanh(t)", 1, std::tanh(1.0)},
    {"2^0.5", 0, std::sqrt(2.0)},
    {"4^0.5^2", 0, std::pow(4.0, 0.25)},
    {"(2^3)^2", 0, 64},
    {"-cos(t)", 0, -1},
    {"0.1 + 0.2", 0, 0.1 + 0.2},
    {"1 - exp(-t/2)", 2, 1 - std::exp(-1.0)},
    {"cos(t) * exp(-0.1*t)", 1, std::cos(1.0) * std::exp(-0.1)},
    {"sin(2*pi*t) / 2", 0.25, 0.5},
    {"0^0", 0, 1},
    {"0^2", 0, 0},
    {"((((t))))", 5, 5},
    {"abs(t - 3) + abs(t + 3)", 1, 6},
    {"-(-(t))", 2, 2},
};

struct Malformed {
    const char* src;
    std::size_t offset;
};

inline const std::vector<Malformed> kMalformed = {
        {"", 0},          {"2t", 1},          {"1 +", 3},        {"(1 + 2", 6},
        {"1 + 2)", 5},    {"foo(1)", 0},      {"sin 1", 4},      {"1 ** 2", 3},
        {"--1", 1},       {"1 2", 2},         {"t(1)", 1},       {"sin()", 4},
        {"pi(2)", 2},     {"1 + $", 4},       {"()", 1},         {"3 * (t + (2)", 12},
        {"exp(1,2)", 5},  {"1e", 1},          {"cosh(t)", 0},    {"1 / ", 4},
};

}  // namespace nmwit::test
