// channels.hpp: Lindblad generators, superoperators, small-time channels
//
// Vectorization is column-stacking everywhere: vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nmwit/linalg.hpp"
#include "nmwit/rate_expr.hpp"

namespace nmwit {

// Piecewise-linear samples. Times strictly increasing; evaluation outside
// [front, back] is an error.
struct RateTable {
    std::vector<double> times;
    std::vector<double> values;

    double eval(double t) const;
};

class RateFunction {
public:
    RateFunction() : impl_(0.0) {}
    static RateFunction constant(double value);
    static RateFunction expression(rate::RateExpression expr);
    static RateFunction expression(std::string_view src);
    static RateFunction table(std::vector<double> times, std::vector<double> values);

    // Throws EvalError when the underlying expression/table cannot be evaluated
    // or the result is not finite.
    double operator()(double t) const;

    bool is_constant() const { return std::holds_alternative<double>(impl_); }
    std::string describe() const;

private:
    std::variant<double, rate::RateExpression, RateTable> impl_;
};

struct LindbladGenerator {
    std::size_t dim = 2;
    std::optional<CMatrix> hamiltonian;
    std::vector<CMatrix> ops;
    std::vector<RateFunction> rates;

    // Throws DomainError/ShapeError/PreconditionError on a malformed generator.
    void validate() const;
};

struct SuperOperator {
    std::size_t dim = 2;
    CMatrix matrix;  // d^2 x d^2, acts on column-stacked density matrices

    CMatrix apply(const CMatrix& rho) const;
};

SuperOperator identity_superoperator(std::size_t dim);
// rho -> L rho L^dagger - 1/2 {L^dagger L, rho}
SuperOperator dissipator_superoperator(const CMatrix& op);
// rho -> -i [H, rho]
SuperOperator hamiltonian_superoperator(const CMatrix& h);

SuperOperator gksl_superoperator(const LindbladGenerator& gen, double t);
// Identity + eps * L(t).
SuperOperator first_order_channel(const LindbladGenerator& gen, double t, double eps);
// exp(eps * L(t + eps/2)).
SuperOperator exact_channel(const LindbladGenerator& gen, double t, double eps);

LindbladGenerator builtin_dephasing(RateFunction gamma);
LindbladGenerator builtin_pauli(RateFunction gx, RateFunction gy, RateFunction gz);
// A constant-rate generator whose rates are the given values.
LindbladGenerator with_constant_rates(std::vector<CMatrix> ops, const std::vector<double>& rates,
                                      std::optional<CMatrix> hamiltonian = std::nullopt);

// The rate-mixed generator p*L1 + (1-p)*L2 frozen at time t.
LindbladGenerator mix_generators(const LindbladGenerator& g1, const LindbladGenerator& g2,
                                 double p, double t);

// L_alpha with i.i.d. standard complex Gaussian entries, constant rates
// uniform on [0, rate_scale].
LindbladGenerator random_markovian(std::size_t dim, std::size_t n_ops, std::uint64_t seed,
                                   double rate_scale = 1.0);
// Hermitian with standard complex Gaussian off-diagonal entries, scaled.
CMatrix random_hamiltonian(std::size_t dim, std::uint64_t seed, double scale = 1.0);
// Haar unitary via QR of a complex Ginibre matrix, phases fixed so diag(R) > 0.
CMatrix random_unitary(std::size_t dim, std::uint64_t seed);
// conj(U) (x) U.
SuperOperator unitary_channel(const CMatrix& u);
SuperOperator random_unitary_channel(std::size_t dim, std::uint64_t seed);

}  // namespace nmwit
