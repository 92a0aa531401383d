// nnls.hpp: Lawson–Hanson active-set solver for min ||A x - b||_2, x >= 0

#pragma once

#include <cstddef>
#include <vector>

namespace nmwit {

// Column-major real matrix, just enough for the least-squares subproblems.
struct RMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // data[r + rows * c]

    RMatrix() = default;
    RMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r + rows * c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r + rows * c]; }
};

struct NnlsResult {
    std::vector<double> x;
    std::vector<double> gradient;  // A^T (A x - b)
    double residual_norm = 0.0;    // ||A x - b||
    std::size_t iterations = 0;
    bool rank_deficient = false;   // columns of A are linearly dependent
    bool converged = false;
};

NnlsResult nnls(const RMatrix& a, const std::vector<double>& b, std::size_t max_iter = 0);

// Unconstrained least squares on a column subset via Householder QR; columns
// with a negligible pivot are given zero weight.
std::vector<double> least_squares(const RMatrix& a, const std::vector<double>& b,
                                  const std::vector<std::size_t>& columns);

// Numerical rank of A (Householder QR with column pivoting).
std::size_t numerical_rank(const RMatrix& a, double rel_tol = 1e-10);

}  // namespace nmwit
