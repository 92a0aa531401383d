#include "nmwit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nmwit/errors.hpp"

namespace nmwit {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols();
        throw ShapeError(os.str());
    }
}

void require_square(const CMatrix& a, const char* op) {
    if (!a.is_square()) {
        std::ostringstream os;
        os << op << ": expected square matrix, got " << a.rows() << "x" << a.cols();
        throw ShapeError(os.str());
    }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw ShapeError("CMatrix: entry count does not match rows*cols");
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::outer(std::span<const cplx> a, std::span<const cplx> b) {
    CMatrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
}

std::vector<cplx> CMatrix::column(std::size_t c) const {
    std::vector<cplx> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    require_same_shape(*this, o, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    require_same_shape(*this, o, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
}

bool CMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "matmul: inner dimensions differ (" << a.rows() << "x" << a.cols() << " * "
           << b.rows() << "x" << b.cols() << ")";
        throw ShapeError(os.str());
    }
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

CMatrix dagger(const CMatrix& a) {
    CMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

CMatrix transpose(const CMatrix& a) {
    CMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
    return c;
}

CMatrix conj(const CMatrix& a) {
    CMatrix c = a;
    for (auto& z : c.data()) z = std::conj(z);
    return c;
}

cplx trace(const CMatrix& a) {
    require_square(a, "trace");
    cplx s{};
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "hs_inner");
    require_square(a, "hs_inner");
    cplx s{};
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) s += std::conj(da[k]) * db[k];
    return s;
}

double hs_norm(const CMatrix& a) {
    double s = 0.0;
    for (const cplx z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

double trace_norm(const CMatrix& a, double tol) {
    require_square(a, "trace_norm");
    // For Hermitian input the singular values are |eigenvalues|; going through
    // a^dagger a would square small eigenvalues into the rounding floor.
    if (is_hermitian(a, tol)) {
        const auto eig = hermitian_eig(a, tol);
        double s = 0.0;
        for (double l : eig.eigenvalues) s += std::abs(l);
        return s;
    }
    const auto eig = hermitian_eig(matmul(dagger(a), a), std::numeric_limits<double>::infinity());
    double s = 0.0;
    for (double l : eig.eigenvalues) s += std::sqrt(std::max(l, 0.0));
    return s;
}

double hermiticity_defect(const CMatrix& a) {
    require_square(a, "hermiticity_defect");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    return worst;
}

bool is_hermitian(const CMatrix& a, double tol) {
    return a.is_square() && hermiticity_defect(a) <= tol;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    return worst;
}

CMatrix HermitianEigen::reconstruct() const {
    const std::size_t n = eigenvalues.size();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double l = eigenvalues[k];
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = l * eigenvectors(i, k);
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eigenvectors(j, k));
        }
    }
    return out;
}

CMatrix HermitianEigen::projector(std::size_t first, std::size_t last) const {
    const std::size_t n = eigenvalues.size();
    CMatrix p(n, n);
    for (std::size_t k = first; k < last; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                p(i, j) += eigenvectors(i, k) * std::conj(eigenvectors(j, k));
    return p;
}

HermitianEigen hermitian_eig(const CMatrix& input, double tol) {
    require_square(input, "hermitian_eig");
    const double defect = hermiticity_defect(input);
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << "hermitian_eig: input not Hermitian (max |a - a^dagger| = " << defect
           << ", tol = " << tol << ")";
        throw PreconditionError(os.str());
    }
    const std::size_t n = input.rows();

    // Work on the exactly Hermitian part.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = input(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx h = 0.5 * (input(i, j) + std::conj(input(j, i)));
            a(i, j) = h;
            a(j, i) = std::conj(h);
        }
    }
    CMatrix v = CMatrix::identity(n);

    const double threshold = 1e-14 * hs_norm(a);
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) continue;
                const cplx phase = a(p, q) / r;  // e^{i theta}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // J = diag(1, e^{-i theta}) * [[c, s], [-s, c]]
                const cplx jpp = c;
                const cplx jpq = s;
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);

                // a <- a J (columns p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                // a <- J^dagger a (rows p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

CMatrix psd_project(const CMatrix& a, double tol) {
    auto eig = hermitian_eig(a, tol);
    for (double& l : eig.eigenvalues) l = std::max(l, 0.0);
    return eig.reconstruct();
}

CMatrix matrix_exp(const CMatrix& a) {
    require_square(a, "matrix_exp");
    const std::size_t n = a.rows();
    const double norm = hs_norm(a);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    CMatrix scaled = std::ldexp(1.0, -squarings) * a;

    // Taylor series; ||scaled|| <= 0.5 so 30 terms is far past double precision.
    CMatrix result = CMatrix::identity(n);
    CMatrix term = CMatrix::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = (1.0 / k) * matmul(term, scaled);
        result += term;
        if (hs_norm(term) <= 1e-18 * hs_norm(result)) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

std::vector<cplx> vec(const CMatrix& x) {
    std::vector<cplx> v(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) v[i + x.rows() * j] = x(i, j);
    return v;
}

CMatrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw ShapeError("unvec: length does not match rows*cols");
    CMatrix x(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) x(i, j) = v[i + rows * j];
    return x;
}

std::vector<cplx> matvec(const CMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size()) throw ShapeError("matvec: dimension mismatch");
    std::vector<cplx> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

namespace pauli {
CMatrix I() { return CMatrix::identity(2); }
CMatrix X() { return CMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix Y() { return CMatrix{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
CMatrix Z() { return CMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace nmwit
