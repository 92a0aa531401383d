#pragma once

#include <random>

#include <Eigen/Dense>

#include "nmwit/linalg.hpp"

namespace nmwit::test {

inline CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (auto& z : m.data()) z = {n(rng), n(rng)};
    return m;
}

inline CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    const CMatrix z = random_complex(n, n, rng);
    CMatrix h = z + dagger(z);
    h *= 0.5;
    return h;
}

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
    return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e) {
    CMatrix m(e.rows(), e.cols());
    for (Eigen::Index r = 0; r < e.rows(); ++r)
        for (Eigen::Index c = 0; c < e.cols(); ++c) m(r, c) = e(r, c);
    return m;
}

// Bell states in the |00>,|01>,|10>,|11> ordering.
inline std::vector<cplx> bell(char which) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (which) {
        case '+': return {s, 0, 0, s};        // phi+
        case '-': return {s, 0, 0, -s};       // phi-
        case 'p': return {0, s, s, 0};        // psi+
        default: return {0, s, -s, 0};        // psi-
    }
}

}  // namespace nmwit::test
