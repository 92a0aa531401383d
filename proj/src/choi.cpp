#include "nmwit/choi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmwit/errors.hpp"

namespace nmwit {

double default_tolerance(double eps) { return std::max(1e-9, 10.0 * eps * eps); }

CMatrix max_entangled_state(std::size_t dim) {
    if (dim < 2) throw DomainError("max_entangled_state: dim must be >= 2");
    std::vector<cplx> phi(dim * dim);
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t i = 0; i < dim; ++i) phi[i * dim + i] = amp;
    return CMatrix::outer(phi, phi);
}

ChoiMatrix choi_of_channel(const SuperOperator& s, double t, double eps) {
    const std::size_t d = s.dim;
    const std::size_t n = d * d;
    if (s.matrix.rows() != n || s.matrix.cols() != n) {
        std::ostringstream os;
        os << "choi_of_channel: superoperator is " << s.matrix.rows() << "x" << s.matrix.cols()
           << ", expected " << n << "x" << n;
        throw ShapeError(os.str());
    }
    const double inv_d = 1.0 / static_cast<double>(d);
    CMatrix c(n, n);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l)
                    c(i * d + k, j * d + l) = inv_d * s.matrix(k + d * l, i + d * j);
    return {d, std::move(c), t, eps};
}

SuperOperator channel_of_choi(const ChoiMatrix& choi) {
    const std::size_t d = choi.dim;
    const std::size_t n = d * d;
    if (choi.matrix.rows() != n || choi.matrix.cols() != n)
        throw ShapeError("channel_of_choi: Choi matrix shape does not match its dimension");
    const double scale = static_cast<double>(d);
    CMatrix s(n, n);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l)
                    s(k + d * l, i + d * j) = scale * choi.matrix(i * d + k, j * d + l);
    return {d, std::move(s)};
}

ChoiMatrix first_order_choi(const LindbladGenerator& gen, double t, double eps) {
    return choi_of_channel(first_order_channel(gen, t, eps), t, eps);
}

ChoiMatrix exact_choi(const LindbladGenerator& gen, double t, double eps) {
    return choi_of_channel(exact_channel(gen, t, eps), t, eps);
}

NMClassification classify(const ChoiMatrix& c, double tol) {
    const auto eig = hermitian_eig(c.matrix);
    NMClassification out;
    out.min_eigenvalue = eig.eigenvalues.front();
    double abs_sum = 0.0;
    for (double l : eig.eigenvalues) {
        abs_sum += std::abs(l);
        if (l < -tol) out.negative_eigenvalues.push_back(l);
    }
    out.trace_norm_deficit = abs_sum - 1.0;
    out.is_markovian = out.min_eigenvalue >= -tol;
    return out;
}

double purity(const ChoiMatrix& c) { return hs_inner(c.matrix, c.matrix).real(); }

ScanReport scan(const LindbladGenerator& gen, double t0, double t1, std::size_t steps, double eps,
                double tol, Exec exec) {
    if (!(t1 > t0)) throw DomainError("scan: t1 must exceed t0");
    if (steps < 1) throw DomainError("scan: steps must be >= 1");
    if (!(eps > 0.0)) throw DomainError("scan: eps must be > 0");
    gen.validate();

    ScanReport report;
    report.eps = eps;
    report.tol = tol;
    const double dt = (t1 - t0) / static_cast<double>(steps);
    report.grid.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        report.grid[k] = k == steps ? t1 : t0 + static_cast<double>(k) * dt;
    report.points.resize(steps + 1);

    for_each_index(steps + 1, exec, [&](std::size_t k) {
        report.points[k] = classify(first_order_choi(gen, report.grid[k], eps), tol);
    });

    // Sequential stitching of non-Markovian runs.
    for (std::size_t k = 0; k <= steps; ++k) {
        const auto& p = report.points[k];
        report.integrated_measure += std::max(0.0, p.trace_norm_deficit) * dt / eps;
        if (p.is_markovian) continue;
        const double start = report.grid[k] - dt;
        if (k > 0 && !report.points[k - 1].is_markovian) {
            report.nm_intervals.back().second = report.grid[k];
        } else {
            report.nm_intervals.emplace_back(start, report.grid[k]);
        }
    }
    return report;
}

}  // namespace nmwit
