#include "nmwit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nmwit/errors.hpp"

namespace nmwit {

double RateTable::eval(double t) const {
    if (times.empty()) throw EvalError("empty rate table");
    if (!(t >= times.front() && t <= times.back())) {
        std::ostringstream os;
        os << "t = " << t << " outside rate table domain [" << times.front() << ", "
           << times.back() << "]";
        throw EvalError(os.str());
    }
    const auto hi = std::upper_bound(times.begin(), times.end(), t);
    if (hi == times.end()) return values.back();
    const std::size_t k = static_cast<std::size_t>(hi - times.begin());
    if (k == 0) return values.front();
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
}

RateFunction RateFunction::constant(double value) {
    if (!std::isfinite(value)) throw DomainError("constant rate must be finite");
    RateFunction f;
    f.impl_ = value;
    return f;
}

RateFunction RateFunction::expression(rate::RateExpression expr) {
    RateFunction f;
    f.impl_ = std::move(expr);
    return f;
}

RateFunction RateFunction::expression(std::string_view src) {
    return expression(rate::RateExpression::parse(src));
}

RateFunction RateFunction::table(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size())
        throw ShapeError("rate table has " + std::to_string(times.size()) + " times but " +
                         std::to_string(values.size()) + " values");
    if (times.empty()) throw DomainError("rate table is empty");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || !std::isfinite(values[k]))
            throw DomainError("rate table entries must be finite");
        if (k > 0 && !(times[k] > times[k - 1]))
            throw DomainError("rate table times must be strictly increasing");
    }
    RateFunction f;
    f.impl_ = RateTable{std::move(times), std::move(values)};
    return f;
}

double RateFunction::operator()(double t) const {
    return std::visit(
        [t](const auto& impl) -> double {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, double>) {
                return impl;
            } else {
                const double v = impl.eval(t);
                if (!std::isfinite(v)) throw EvalError("rate evaluated to a non-finite value");
                return v;
            }
        },
        impl_);
}

std::string RateFunction::describe() const {
    return std::visit(
        [](const auto& impl) -> std::string {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, double>) {
                std::ostringstream os;
                os.precision(17);
                os << impl;
                return os.str();
            } else if constexpr (std::is_same_v<T, rate::RateExpression>) {
                return impl.source();
            } else {
                return "table(" + std::to_string(impl.times.size()) + " samples)";
            }
        },
        impl_);
}

void LindbladGenerator::validate() const {
    if (dim < 1) throw DomainError("generator dimension must be >= 1");
    if (ops.empty() || ops.size() > dim * dim) {
        std::ostringstream os;
        os << "generator needs 1 <= #ops <= d^2 = " << dim * dim << ", got " << ops.size();
        throw DomainError(os.str());
    }
    if (ops.size() != rates.size())
        throw ShapeError("generator needs exactly one rate per Lindblad operator");
    for (std::size_t a = 0; a < ops.size(); ++a) {
        if (ops[a].rows() != dim || ops[a].cols() != dim) {
            std::ostringstream os;
            os << "Lindblad operator " << a << " is " << ops[a].rows() << "x" << ops[a].cols()
               << ", expected " << dim << "x" << dim;
            throw ShapeError(os.str());
        }
        if (!ops[a].all_finite())
            throw DomainError("Lindblad operator " + std::to_string(a) + " has non-finite entries");
    }
    if (hamiltonian) {
        if (hamiltonian->rows() != dim || hamiltonian->cols() != dim)
            throw ShapeError("Hamiltonian shape does not match generator dimension");
        if (!hamiltonian->all_finite()) throw DomainError("Hamiltonian has non-finite entries");
        const double defect = hermiticity_defect(*hamiltonian);
        if (defect > kHermitianTol) {
            std::ostringstream os;
            os << "Hamiltonian not Hermitian (max |H - H^dagger| = " << defect << ")";
            throw PreconditionError(os.str());
        }
    }
}

CMatrix SuperOperator::apply(const CMatrix& rho) const {
    const auto out = matvec(matrix, vec(rho));
    return unvec(out, dim, dim);
}

SuperOperator identity_superoperator(std::size_t dim) {
    return {dim, CMatrix::identity(dim * dim)};
}

SuperOperator dissipator_superoperator(const CMatrix& op) {
    const std::size_t d = op.rows();
    const CMatrix id = CMatrix::identity(d);
    const CMatrix ldl = matmul(dagger(op), op);
    CMatrix m = kron(conj(op), op);
    m -= 0.5 * kron(id, ldl);
    m -= 0.5 * kron(transpose(ldl), id);
    return {d, std::move(m)};
}

SuperOperator hamiltonian_superoperator(const CMatrix& h) {
    const std::size_t d = h.rows();
    const CMatrix id = CMatrix::identity(d);
    CMatrix m = kron(id, h) - kron(transpose(h), id);
    m *= cplx{0.0, -1.0};
    return {d, std::move(m)};
}

SuperOperator gksl_superoperator(const LindbladGenerator& gen, double t) {
    const std::size_t d = gen.dim;
    CMatrix m(d * d, d * d);
    if (gen.hamiltonian) m += hamiltonian_superoperator(*gen.hamiltonian).matrix;
    for (std::size_t a = 0; a < gen.ops.size(); ++a) {
        double rate = 0.0;
        try {
            rate = gen.rates[a](t);
        } catch (const EvalError& e) {
            std::ostringstream os;
            os << "rate " << a << " at t = " << t << ": " << e.what();
            throw EvalError(os.str());
        }
        if (rate != 0.0) m += rate * dissipator_superoperator(gen.ops[a]).matrix;
    }
    return {d, std::move(m)};
}

SuperOperator first_order_channel(const LindbladGenerator& gen, double t, double eps) {
    if (!(eps > 0.0)) throw DomainError("eps must be > 0");
    SuperOperator s = gksl_superoperator(gen, t);
    s.matrix *= eps;
    s.matrix += CMatrix::identity(gen.dim * gen.dim);
    return s;
}

SuperOperator exact_channel(const LindbladGenerator& gen, double t, double eps) {
    if (!(eps > 0.0)) throw DomainError("eps must be > 0");
    SuperOperator s = gksl_superoperator(gen, t + 0.5 * eps);
    s.matrix = matrix_exp(eps * s.matrix);
    return s;
}

LindbladGenerator builtin_dephasing(RateFunction gamma) {
    LindbladGenerator g;
    g.dim = 2;
    g.ops = {pauli::Z()};
    g.rates = {std::move(gamma)};
    return g;
}

LindbladGenerator builtin_pauli(RateFunction gx, RateFunction gy, RateFunction gz) {
    LindbladGenerator g;
    g.dim = 2;
    g.ops = {pauli::X(), pauli::Y(), pauli::Z()};
    g.rates = {std::move(gx), std::move(gy), std::move(gz)};
    return g;
}

LindbladGenerator with_constant_rates(std::vector<CMatrix> ops, const std::vector<double>& rates,
                                      std::optional<CMatrix> hamiltonian) {
    if (ops.empty()) throw DomainError("with_constant_rates: no operators");
    LindbladGenerator g;
    g.dim = ops.front().rows();
    g.ops = std::move(ops);
    for (double r : rates) g.rates.push_back(RateFunction::constant(r));
    g.hamiltonian = std::move(hamiltonian);
    g.validate();
    return g;
}

LindbladGenerator mix_generators(const LindbladGenerator& g1, const LindbladGenerator& g2,
                                 double p, double t) {
    if (g1.dim != g2.dim) throw ShapeError("mix_generators: dimension mismatch");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mix_generators: p must lie in [0, 1]");
    LindbladGenerator g;
    g.dim = g1.dim;
    auto append = [&](const LindbladGenerator& src, double w) {
        for (std::size_t a = 0; a < src.ops.size(); ++a) {
            g.ops.push_back(src.ops[a]);
            g.rates.push_back(RateFunction::constant(w * src.rates[a](t)));
        }
    };
    append(g1, p);
    append(g2, 1.0 - p);
    if (g1.hamiltonian || g2.hamiltonian) {
        CMatrix h(g.dim, g.dim);
        if (g1.hamiltonian) h += p * *g1.hamiltonian;
        if (g2.hamiltonian) h += (1.0 - p) * *g2.hamiltonian;
        g.hamiltonian = std::move(h);
    }
    // The concatenated list may exceed d^2 operators; the generator it denotes
    // is still GKSL, so the count bound is not re-checked here.
    return g;
}

namespace {

CMatrix ginibre(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix m(rows, cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (auto& z : m.data()) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = cplx{s * re, s * im};
    }
    return m;
}

}  // namespace

LindbladGenerator random_markovian(std::size_t dim, std::size_t n_ops, std::uint64_t seed,
                                   double rate_scale) {
    if (dim < 1) throw DomainError("random_markovian: dim must be >= 1");
    if (n_ops < 1 || n_ops > dim * dim) {
        std::ostringstream os;
        os << "random_markovian: n_ops must lie in [1, " << dim * dim << "], got " << n_ops;
        throw DomainError(os.str());
    }
    if (!(rate_scale >= 0.0) || !std::isfinite(rate_scale))
        throw DomainError("random_markovian: rate_scale must be finite and >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    LindbladGenerator g;
    g.dim = dim;
    for (std::size_t a = 0; a < n_ops; ++a) {
        g.ops.push_back(ginibre(dim, dim, rng));
        g.rates.push_back(RateFunction::constant(rate_scale * uniform(rng)));
    }
    return g;
}

CMatrix random_hamiltonian(std::size_t dim, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    const CMatrix z = ginibre(dim, dim, rng);
    CMatrix h = z + dagger(z);
    h *= 0.5 * scale;
    return h;
}

CMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim < 1) throw DomainError("random_unitary: dim must be >= 1");
    std::mt19937_64 rng(seed);
    CMatrix q = ginibre(dim, dim, rng);
    // Modified Gram-Schmidt, two passes. The implied R has a positive real
    // diagonal, which is the phase fix that makes Q Haar distributed.
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj{};
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < dim; ++i) q(i, j) -= proj * q(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) /= norm;
    }
    return q;
}

SuperOperator unitary_channel(const CMatrix& u) {
    if (!u.is_square()) throw ShapeError("unitary_channel: expected square matrix");
    return {u.rows(), kron(conj(u), u)};
}

SuperOperator random_unitary_channel(std::size_t dim, std::uint64_t seed) {
    if (dim < 2) throw DomainError("random_unitary_channel: dim must be >= 2");
    return unitary_channel(random_unitary(dim, seed));
}

}  // namespace nmwit
