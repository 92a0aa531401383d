#include "nmwit/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nmwit/errors.hpp"

namespace nmwit {

namespace {

double dot_col(const RMatrix& a, std::size_t c, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows; ++r) s += a(r, c) * v[r];
    return s;
}

std::vector<double> residual(const RMatrix& a, const std::vector<double>& x,
                             const std::vector<double>& b) {
    std::vector<double> res(a.rows);
    for (std::size_t r = 0; r < a.rows; ++r) res[r] = -b[r];
    for (std::size_t c = 0; c < a.cols; ++c) {
        if (x[c] == 0.0) continue;
        for (std::size_t r = 0; r < a.rows; ++r) res[r] += a(r, c) * x[c];
    }
    return res;
}

// In-place Householder QR of `m` (rows x k) with optional column pivoting.
// Returns the diagonal of R; `perm` receives the column order.
struct Householder {
    RMatrix qr;
    std::vector<double> rdiag;
    std::vector<double> beta;
    std::vector<std::size_t> perm;
};

Householder householder(RMatrix m, bool pivot) {
    const std::size_t rows = m.rows;
    const std::size_t k = m.cols;
    Householder h;
    h.perm.resize(k);
    std::iota(h.perm.begin(), h.perm.end(), std::size_t{0});
    h.rdiag.assign(k, 0.0);
    h.beta.assign(k, 0.0);
    const std::size_t steps = std::min(rows, k);
    for (std::size_t j = 0; j < steps; ++j) {
        if (pivot) {
            std::size_t best = j;
            double best_norm = -1.0;
            for (std::size_t c = j; c < k; ++c) {
                double s = 0.0;
                for (std::size_t r = j; r < rows; ++r) s += m(r, c) * m(r, c);
                if (s > best_norm) {
                    best_norm = s;
                    best = c;
                }
            }
            if (best != j) {
                for (std::size_t r = 0; r < rows; ++r) std::swap(m(r, j), m(r, best));
                std::swap(h.perm[j], h.perm[best]);
            }
        }
        double norm = 0.0;
        for (std::size_t r = j; r < rows; ++r) norm += m(r, j) * m(r, j);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = m(j, j) > 0 ? -norm : norm;
        m(j, j) -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t r = j; r < rows; ++r) vnorm2 += m(r, j) * m(r, j);
        h.beta[j] = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;
        for (std::size_t c = j + 1; c < k; ++c) {
            double s = 0.0;
            for (std::size_t r = j; r < rows; ++r) s += m(r, j) * m(r, c);
            s *= h.beta[j];
            for (std::size_t r = j; r < rows; ++r) m(r, c) -= s * m(r, j);
        }
        h.rdiag[j] = alpha;
    }
    h.qr = std::move(m);
    return h;
}

}  // namespace

std::vector<double> least_squares(const RMatrix& a, const std::vector<double>& b,
                                  const std::vector<std::size_t>& columns) {
    const std::size_t k = columns.size();
    std::vector<double> out(k, 0.0);
    if (k == 0) return out;
    RMatrix sub(a.rows, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < a.rows; ++r) sub(r, j) = a(r, columns[j]);
    const Householder h = householder(std::move(sub), true);

    // y = Q^T b
    std::vector<double> y = b;
    const std::size_t steps = std::min(a.rows, k);
    for (std::size_t j = 0; j < steps; ++j) {
        if (h.beta[j] == 0.0) continue;
        double s = 0.0;
        for (std::size_t r = j; r < a.rows; ++r) s += h.qr(r, j) * y[r];
        s *= h.beta[j];
        for (std::size_t r = j; r < a.rows; ++r) y[r] -= s * h.qr(r, j);
    }
    const double rmax = steps > 0 ? std::abs(h.rdiag[0]) : 0.0;
    std::vector<double> z(k, 0.0);
    for (std::size_t jj = steps; jj-- > 0;) {
        if (std::abs(h.rdiag[jj]) <= 1e-12 * rmax) continue;
        double s = y[jj];
        for (std::size_t c = jj + 1; c < steps; ++c) s -= h.qr(jj, c) * z[c];
        z[jj] = s / h.rdiag[jj];
    }
    for (std::size_t j = 0; j < k; ++j) out[h.perm[j]] = z[j];
    return out;
}

std::size_t numerical_rank(const RMatrix& a, double rel_tol) {
    if (a.cols == 0 || a.rows == 0) return 0;
    const Householder h = householder(a, true);
    const std::size_t steps = std::min(a.rows, a.cols);
    const double rmax = std::abs(h.rdiag[0]);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < steps; ++j)
        if (std::abs(h.rdiag[j]) > rel_tol * rmax) ++rank;
    return rank;
}

NnlsResult nnls(const RMatrix& a, const std::vector<double>& b, std::size_t max_iter) {
    if (b.size() != a.rows) throw ShapeError("nnls: right-hand side length does not match A");
    const std::size_t n = a.cols;
    if (max_iter == 0) max_iter = 3 * n + 10;

    NnlsResult out;
    out.x.assign(n, 0.0);
    out.rank_deficient = numerical_rank(a) < n;

    std::vector<bool> passive(n, false);
    double col_scale = 0.0;
    for (double v : a.data) col_scale = std::max(col_scale, std::abs(v));
    double b_scale = 0.0;
    for (double v : b) b_scale = std::max(b_scale, std::abs(v));
    const double w_tol = 1e3 * std::numeric_limits<double>::epsilon() *
                         static_cast<double>(a.rows) * col_scale * std::max(b_scale, col_scale);

    auto negative_gradient = [&] {
        const auto res = residual(a, out.x, b);
        std::vector<double> w(n);
        for (std::size_t c = 0; c < n; ++c) w[c] = -dot_col(a, c, res);
        return w;
    };

    std::vector<double> w = negative_gradient();
    while (out.iterations < max_iter) {
        std::size_t best = n;
        double best_w = w_tol;
        for (std::size_t c = 0; c < n; ++c) {
            if (!passive[c] && w[c] > best_w) {
                best_w = w[c];
                best = c;
            }
        }
        if (best == n) {
            out.converged = true;
            break;
        }
        passive[best] = true;
        ++out.iterations;

        for (std::size_t inner = 0; inner <= n; ++inner) {
            std::vector<std::size_t> cols;
            for (std::size_t c = 0; c < n; ++c)
                if (passive[c]) cols.push_back(c);
            const auto zsub = least_squares(a, b, cols);
            std::vector<double> z(n, 0.0);
            bool feasible = true;
            for (std::size_t j = 0; j < cols.size(); ++j) {
                z[cols[j]] = zsub[j];
                if (zsub[j] <= 0.0) feasible = false;
            }
            if (feasible) {
                out.x = z;
                break;
            }
            double alpha = 1.0;
            for (std::size_t c : cols) {
                if (z[c] <= 0.0) {
                    const double denom = out.x[c] - z[c];
                    if (denom > 0.0) alpha = std::min(alpha, out.x[c] / denom);
                }
            }
            for (std::size_t c = 0; c < n; ++c) out.x[c] += alpha * (z[c] - out.x[c]);
            for (std::size_t c : cols) {
                if (out.x[c] <= 1e-15 * std::max(1.0, std::abs(z[c]))) {
                    out.x[c] = 0.0;
                    passive[c] = false;
                }
            }
        }
        w = negative_gradient();
        // A column that re-enters with no progress would cycle; stop there.
        if (passive[best] == false && w[best] > best_w) break;
    }

    const auto res = residual(a, out.x, b);
    out.gradient.resize(n);
    for (std::size_t c = 0; c < n; ++c) out.gradient[c] = dot_col(a, c, res);
    double r2 = 0.0;
    for (double v : res) r2 += v * v;
    out.residual_norm = std::sqrt(r2);
    return out;
}

}  // namespace nmwit
