// linalg.hpp: dense complex matrices, Hermitian eigensolver, PSD projection, expm

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nmwit {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;

// Row-major dense complex matrix. Plain value type.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
    // Outer product |a><b|.
    static CMatrix outer(std::span<const cplx> a, std::span<const cplx> b);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    std::vector<cplx> column(std::size_t c) const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);

    bool all_finite() const;

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix dagger(const CMatrix& a);
CMatrix transpose(const CMatrix& a);
CMatrix conj(const CMatrix& a);

cplx trace(const CMatrix& a);
// Tr(a^dagger b).
cplx hs_inner(const CMatrix& a, const CMatrix& b);
double hs_norm(const CMatrix& a);
double trace_norm(const CMatrix& a, double tol = kHermitianTol);

// max_ij |a_ij - conj(a_ji)|
double hermiticity_defect(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tol = kHermitianTol);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

struct HermitianEigen {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // column k belongs to eigenvalues[k]

    CMatrix reconstruct() const;
    // Orthogonal projector onto span of columns [first, last).
    CMatrix projector(std::size_t first, std::size_t last) const;
};

// Cyclic complex Jacobi. Throws PreconditionError if `a` is not Hermitian within tol.
HermitianEigen hermitian_eig(const CMatrix& a, double tol = kHermitianTol);

// Nearest PSD matrix in Hilbert-Schmidt norm (negative eigenvalues clamped to zero).
CMatrix psd_project(const CMatrix& a, double tol = kHermitianTol);

// Scaling-and-squaring Taylor exponential.
CMatrix matrix_exp(const CMatrix& a);

// Column-stacking vectorization: vec(X)[i + rows*j] = X(i, j).
std::vector<cplx> vec(const CMatrix& x);
CMatrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols);
std::vector<cplx> matvec(const CMatrix& a, std::span<const cplx> x);

namespace pauli {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
}  // namespace pauli

}  // namespace nmwit
