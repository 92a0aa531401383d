#include "nmwit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nmwit/errors.hpp"
#include "nmwit/nnls.hpp"

namespace nmwit {

namespace {

constexpr double kViolationTol = 1e-8;
constexpr double kKktTol = 1e-8;
constexpr double kClusterGap = 1e-9;

void require_choi_input(const ChoiMatrix& cn, std::size_t dim, const char* op) {
    const std::size_t n = dim * dim;
    if (cn.dim != dim || cn.matrix.rows() != n || cn.matrix.cols() != n) {
        std::ostringstream os;
        os << op << ": Choi matrix of dimension " << cn.dim << " does not match family dimension "
           << dim;
        throw ShapeError(os.str());
    }
    const double defect = hermiticity_defect(cn.matrix);
    if (defect > kHermitianTol) {
        std::ostringstream os;
        os << op << ": Choi matrix not Hermitian (defect " << defect << ")";
        throw PreconditionError(os.str());
    }
    const cplx tr = trace(cn.matrix);
    if (std::abs(tr - 1.0) > 1e-10) {
        std::ostringstream os;
        os << op << ": Choi matrix trace is " << tr.real() << ", expected 1";
        throw PreconditionError(os.str());
    }
}

// Stacks Re/Im parts of each entry so the real dot product equals Re Tr(A^dagger B).
void write_real_column(const CMatrix& m, RMatrix& a, std::size_t col) {
    const auto d = m.data();
    for (std::size_t e = 0; e < d.size(); ++e) {
        a(2 * e, col) = d[e].real();
        a(2 * e + 1, col) = d[e].imag();
    }
}

std::vector<double> real_vector(const CMatrix& m) {
    const auto d = m.data();
    std::vector<double> v(2 * d.size());
    for (std::size_t e = 0; e < d.size(); ++e) {
        v[2 * e] = d[e].real();
        v[2 * e + 1] = d[e].imag();
    }
    return v;
}

// Orthonormal basis of n x n Hermitian matrices under Re Tr(A^dagger B):
// diagonal units, then (E_jk + E_kj)/sqrt2 and i(E_jk - E_kj)/sqrt2 for j < k.
std::vector<CMatrix> hermitian_matrix_basis(std::size_t n) {
    std::vector<CMatrix> basis;
    for (std::size_t j = 0; j < n; ++j) {
        CMatrix e(n, n);
        e(j, j) = 1.0;
        basis.push_back(std::move(e));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            CMatrix sym(n, n);
            sym(j, k) = s;
            sym(k, j) = s;
            basis.push_back(std::move(sym));
            CMatrix asym(n, n);
            asym(j, k) = cplx{0.0, s};
            asym(k, j) = cplx{0.0, -s};
            basis.push_back(std::move(asym));
        }
    }
    return basis;
}

// Superoperator of rho -> F_j rho F_k - 1/2 {F_k F_j, rho} for Hermitian F.
CMatrix kossakowski_term(const CMatrix& fj, const CMatrix& fk) {
    const std::size_t d = fj.rows();
    const CMatrix id = CMatrix::identity(d);
    const CMatrix prod = matmul(fk, fj);
    CMatrix m = kron(transpose(fk), fj);
    m -= 0.5 * kron(id, prod);
    m -= 0.5 * kron(transpose(prod), id);
    return m;
}

}  // namespace

const char* to_string(WitnessKind kind) {
    return kind == WitnessKind::spectral_projector ? "spectral_projector" : "theorem3";
}

std::vector<WitnessOperator> spectral_witnesses(const ChoiMatrix& c, double tol) {
    const auto eig = hermitian_eig(c.matrix);
    std::vector<WitnessOperator> out;
    const auto& ev = eig.eigenvalues;
    std::size_t k = 0;
    while (k < ev.size() && ev[k] < -tol) {
        std::size_t end = k + 1;
        while (end < ev.size() && ev[end] < -tol && ev[end] - ev[end - 1] < kClusterGap) ++end;
        std::ostringstream os;
        os.precision(17);
        os << "spectral projector of eigenvalue cluster [" << ev[k];
        if (end - k > 1) os << ", " << ev[end - 1];
        os << "] (multiplicity " << end - k << ") of Choi state at t=" << c.t << ", eps=" << c.eps;
        out.push_back({eig.projector(k, end), WitnessKind::spectral_projector, os.str()});
        k = end;
    }
    return out;
}

double expectation(const WitnessOperator& w, const ChoiMatrix& c) {
    if (w.matrix.rows() != c.matrix.rows() || w.matrix.cols() != c.matrix.cols())
        throw ShapeError("expectation: witness and Choi matrix shapes differ");
    const cplx v = hs_inner(w.matrix, c.matrix);
    if (std::abs(v.imag()) > 1e-10) {
        std::ostringstream os;
        os << "expectation: imaginary part " << v.imag() << " exceeds 1e-10";
        throw PreconditionError(os.str());
    }
    return v.real();
}

std::vector<CMatrix> traceless_hermitian_basis(std::size_t dim) {
    std::vector<CMatrix> basis;
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = j + 1; k < dim; ++k) {
            CMatrix sym(dim, dim);
            sym(j, k) = s;
            sym(k, j) = s;
            basis.push_back(std::move(sym));
            CMatrix asym(dim, dim);
            asym(j, k) = cplx{0.0, -s};
            asym(k, j) = cplx{0.0, s};
            basis.push_back(std::move(asym));
        }
    }
    for (std::size_t l = 1; l < dim; ++l) {
        CMatrix diag(dim, dim);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
        for (std::size_t j = 0; j < l; ++j) diag(j, j) = norm;
        diag(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(std::move(diag));
    }
    return basis;
}

ChoiMatrix fixed_basis_choi(const MarkovianFamily& fam, const std::vector<double>& rates) {
    if (rates.size() != fam.basis_ops.size())
        throw ShapeError("fixed_basis_choi: one rate per basis operator required");
    return first_order_choi(with_constant_rates(fam.basis_ops, rates), fam.t, fam.eps);
}

NearestMCSResult nearest_mcs_fixed_basis(const ChoiMatrix& cn, const MarkovianFamily& fam) {
    if (fam.mode != FamilyMode::fixed_basis)
        throw PreconditionError("nearest_mcs_fixed_basis: family mode must be fixed_basis");
    if (fam.basis_ops.empty() || fam.basis_ops.size() > fam.dim * fam.dim)
        throw DomainError("nearest_mcs_fixed_basis: need 1 <= #basis_ops <= d^2");
    if (!(fam.eps > 0.0)) throw DomainError("nearest_mcs_fixed_basis: eps must be > 0");
    require_choi_input(cn, fam.dim, "nearest_mcs_fixed_basis");

    // Scaled problem: min_{G >= 0} || (C_N - C_0)/eps - sum_a G_a Choi(D_a) ||.
    const std::size_t n_ops = fam.basis_ops.size();
    const CMatrix c0 = max_entangled_state(fam.dim);
    const std::size_t entries = cn.matrix.data().size();
    RMatrix a(2 * entries, n_ops);
    for (std::size_t k = 0; k < n_ops; ++k)
        write_real_column(choi_of_channel(dissipator_superoperator(fam.basis_ops[k])).matrix, a, k);
    CMatrix target = cn.matrix - c0;
    target *= 1.0 / fam.eps;
    const auto sol = nnls(a, real_vector(target));

    NearestMCSResult out;
    out.rates = sol.x;
    out.iterations = sol.iterations;
    out.degenerate = sol.rank_deficient;
    out.choi_star = fixed_basis_choi(fam, out.rates);
    out.residual = hs_norm(cn.matrix - out.choi_star.matrix);

    // KKT on the scaled objective, gradient 2 A^T (A G - y).
    bool ok = true;
    double worst = 0.0;
    for (std::size_t k = 0; k < n_ops; ++k) {
        const double g = 2.0 * sol.gradient[k];
        if (out.rates[k] == 0.0) {
            ok = ok && g >= -kKktTol;
            worst = std::max(worst, std::max(0.0, -g));
        } else {
            ok = ok && std::abs(g) <= kKktTol;
            worst = std::max(worst, std::abs(g));
        }
        ok = ok && out.rates[k] >= 0.0;
    }
    out.kkt_ok = ok;
    out.gradient_norm = worst;
    return out;
}

NearestMCSResult nearest_mcs_full_gksl(const ChoiMatrix& cn, std::size_t dim, double eps,
                                       const FullGkslOptions& opts) {
    if (!(eps > 0.0)) throw DomainError("nearest_mcs_full_gksl: eps must be > 0");
    if (opts.max_iter == 0) throw DomainError("nearest_mcs_full_gksl: max_iter must be >= 1");
    require_choi_input(cn, dim, "nearest_mcs_full_gksl");

    const auto fbasis = traceless_hermitian_basis(dim);
    const std::size_t n = fbasis.size();
    const auto kbasis = hermitian_matrix_basis(n);
    const std::size_t nh = n;
    const std::size_t np = nh + kbasis.size();

    // Choi images of the parameter directions (without eps).
    std::vector<CMatrix> terms(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            terms[j * n + k] =
                choi_of_channel({dim, kossakowski_term(fbasis[j], fbasis[k])}).matrix;
    std::vector<CMatrix> columns;
    columns.reserve(np);
    for (std::size_t k = 0; k < nh; ++k)
        columns.push_back(choi_of_channel(hamiltonian_superoperator(fbasis[k])).matrix);
    for (const CMatrix& e : kbasis) {
        CMatrix col(dim * dim, dim * dim);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (e(j, k) != cplx{}) col += e(j, k) * terms[j * n + k];
        columns.push_back(std::move(col));
    }

    const CMatrix c0 = max_entangled_state(dim);
    CMatrix target = cn.matrix - c0;
    target *= 1.0 / eps;

    // Normal equations: f(theta) = ||A theta - y||^2, grad = 2 (Q theta - b).
    CMatrix q(np, np);
    std::vector<double> b(np);
    for (std::size_t p = 0; p < np; ++p) {
        b[p] = hs_inner(columns[p], target).real();
        for (std::size_t r = p; r < np; ++r) {
            const double v = hs_inner(columns[p], columns[r]).real();
            q(p, r) = v;
            q(r, p) = v;
        }
    }
    const auto qeig = hermitian_eig(q);
    const double lipschitz = 2.0 * qeig.eigenvalues.back();
    const double step = opts.step > 0.0 ? opts.step : 0.9 / lipschitz;

    auto project = [&](std::vector<double>& theta) {
        CMatrix k(n, n);
        for (std::size_t m = 0; m < kbasis.size(); ++m) k += theta[nh + m] * kbasis[m];
        const CMatrix kp = psd_project(k, 1e-8 * std::max(1.0, hs_norm(k)));
        for (std::size_t m = 0; m < kbasis.size(); ++m)
            theta[nh + m] = hs_inner(kbasis[m], kp).real();
    };

    // Warm start: projected unconstrained minimizer (pseudo-inverse of Q).
    std::vector<double> theta(np, 0.0);
    {
        const double cutoff = 1e-12 * qeig.eigenvalues.back();
        for (std::size_t k = 0; k < np; ++k) {
            const double lk = qeig.eigenvalues[k];
            if (lk <= cutoff) continue;
            cplx proj{};
            for (std::size_t p = 0; p < np; ++p) proj += std::conj(qeig.eigenvectors(p, k)) * b[p];
            for (std::size_t p = 0; p < np; ++p)
                theta[p] += (qeig.eigenvectors(p, k) * proj).real() / lk;
        }
        project(theta);
    }

    NearestMCSResult out;
    std::vector<double> grad(np), next(np);
    double gm_norm = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    while (it < opts.max_iter) {
        for (std::size_t p = 0; p < np; ++p) {
            double s = -b[p];
            for (std::size_t r = 0; r < np; ++r) s += q(p, r).real() * theta[r];
            grad[p] = 2.0 * s;
        }
        for (std::size_t p = 0; p < np; ++p) next[p] = theta[p] - step * grad[p];
        project(next);
        double s = 0.0;
        for (std::size_t p = 0; p < np; ++p) s += (theta[p] - next[p]) * (theta[p] - next[p]);
        gm_norm = std::sqrt(s) / step;
        theta.swap(next);
        ++it;
        if (gm_norm < opts.tol) break;
    }

    out.iterations = it;
    out.gradient_norm = gm_norm;
    out.kkt_ok = gm_norm < opts.tol;
    out.hamiltonian_coeffs.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(nh));
    out.kossakowski = CMatrix(n, n);
    for (std::size_t m = 0; m < kbasis.size(); ++m) out.kossakowski += theta[nh + m] * kbasis[m];

    CMatrix generator_choi(dim * dim, dim * dim);
    for (std::size_t p = 0; p < np; ++p)
        if (theta[p] != 0.0) generator_choi += theta[p] * columns[p];
    out.choi_star = {dim, c0 + eps * generator_choi, cn.t, eps};
    out.residual = hs_norm(cn.matrix - out.choi_star.matrix);
    return out;
}

WitnessOperator theorem3_witness(const ChoiMatrix& cn, const ChoiMatrix& cm_star) {
    if (cn.matrix.rows() != cm_star.matrix.rows() || cn.matrix.cols() != cm_star.matrix.cols())
        throw ShapeError("theorem3_witness: Choi matrix shapes differ");
    const CMatrix diff = cn.matrix - cm_star.matrix;
    const double c0 = hs_inner(cm_star.matrix, diff).real();
    // C* - C_N first: adding c0 to O(1) entries of C* would round away the difference.
    CMatrix w = cm_star.matrix - cn.matrix;
    for (std::size_t i = 0; i < w.rows(); ++i) w(i, i) += c0;
    std::ostringstream os;
    os.precision(17);
    os << "c0*I + C* - C_N with c0=" << c0 << ", ||C_N - C*||_2=" << hs_norm(diff)
       << ", t=" << cn.t << ", eps=" << cn.eps;
    return {std::move(w), WitnessKind::theorem3, os.str()};
}

ChoiMatrix sample_markovian_choi(std::size_t dim, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint64_t u = rng();
    const std::size_t kind = u % 4;
    const std::size_t n_ops = 1 + static_cast<std::size_t>((u >> 8) % (dim * dim));
    LindbladGenerator gen;
    if (kind == 0) {
        // purely unitary: one operator with zero rate
        gen = random_markovian(dim, 1, rng(), 0.0);
    } else {
        gen = random_markovian(dim, n_ops, rng(), 1.0);
    }
    if (kind != 1) gen.hamiltonian = random_hamiltonian(dim, rng());
    return first_order_choi(gen, 0.0, eps);
}

VerifyResult verify_witness(const WitnessOperator& w, std::size_t dim, double eps,
                            std::size_t n_samples, std::uint64_t seed, Exec exec) {
    if (n_samples < 1) throw DomainError("verify_witness: n_samples must be >= 1");
    if (!(eps > 0.0)) throw DomainError("verify_witness: eps must be > 0");
    if (w.matrix.rows() != dim * dim || w.matrix.cols() != dim * dim)
        throw ShapeError("verify_witness: witness shape does not match dim^2");
    std::vector<double> values(n_samples);
    for_each_index(n_samples, exec, [&](std::size_t i) {
        values[i] = expectation(w, sample_markovian_choi(dim, eps, derive_seed(seed, i)));
    });
    VerifyResult out;
    out.min_expectation = values.front();
    for (double v : values) {
        out.min_expectation = std::min(out.min_expectation, v);
        if (v < -kViolationTol) ++out.violations;
    }
    return out;
}

UniquenessResult uniqueness_check(const ChoiMatrix& cn, const ChoiMatrix& cm_star,
                                  std::size_t dim, double eps, std::size_t n_samples,
                                  std::uint64_t seed, const std::optional<MarkovianFamily>& family,
                                  Exec exec) {
    if (n_samples < 1) throw DomainError("uniqueness_check: n_samples must be >= 1");
    const CMatrix diff = cn.matrix - cm_star.matrix;
    std::vector<double> lhs(n_samples);
    for_each_index(n_samples, exec, [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i);
        ChoiMatrix sample;
        if (family) {
            std::mt19937_64 rng(s);
            std::uniform_real_distribution<double> uniform(0.0, 2.0);
            std::vector<double> rates(family->basis_ops.size());
            for (double& r : rates) r = uniform(rng);
            sample = fixed_basis_choi(*family, rates);
        } else {
            sample = sample_markovian_choi(dim, eps, s);
        }
        lhs[i] = hs_inner(diff, sample.matrix - cm_star.matrix).real();
    });
    UniquenessResult out;
    out.max_lhs = *std::max_element(lhs.begin(), lhs.end());
    out.holds = out.max_lhs <= kViolationTol;
    return out;
}

}  // namespace nmwit
