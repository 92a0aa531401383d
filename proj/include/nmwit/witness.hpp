// witness.hpp: non-Markovianity witnesses
//
// Two constructions:
//  * spectral: orthogonal projectors onto the negative eigenspaces of a Choi state;
//  * nearest-Markovian: W = c0*I + C* - C_N with C* the Hilbert–Schmidt projection
//    of C_N onto the first-order Markovian Choi states and c0 = Tr(C* (C_N - C*)).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nmwit/channels.hpp"
#include "nmwit/choi.hpp"
#include "nmwit/linalg.hpp"
#include "nmwit/parallel.hpp"

namespace nmwit {

enum class WitnessKind { spectral_projector, theorem3 };

const char* to_string(WitnessKind kind);

struct WitnessOperator {
    CMatrix matrix;
    WitnessKind kind = WitnessKind::spectral_projector;
    std::string provenance;
};

enum class FamilyMode { fixed_basis, full_gksl };

// The Markovian Choi states {Choi(1 + eps * L)} at a probed instant, either with
// L restricted to nonnegative rates on fixed Lindblad operators, or ranging
// over all GKSL generators.
struct MarkovianFamily {
    FamilyMode mode = FamilyMode::fixed_basis;
    std::size_t dim = 2;
    std::vector<CMatrix> basis_ops;
    double eps = 1e-3;
    double t = 0.0;
};

struct NearestMCSResult {
    ChoiMatrix choi_star;
    std::vector<double> rates;                // fixed_basis: Gamma* >= 0
    CMatrix kossakowski;                      // full_gksl: K* (PSD)
    std::vector<double> hamiltonian_coeffs;   // full_gksl: h* over the traceless basis
    double residual = 0.0;                    // ||C_N - C*||_2
    double gradient_norm = 0.0;               // scaled gradient / gradient-mapping norm
    bool kkt_ok = false;
    bool degenerate = false;                  // dissipator directions linearly dependent
    std::size_t iterations = 0;
};

struct FullGkslOptions {
    std::size_t max_iter = 100000;
    double step = 0.0;  // 0 selects 0.9 / L
    double tol = 1e-10;
};

// Spectral projectors of eigenvalue clusters below -tol; empty iff PSD within tol.
std::vector<WitnessOperator> spectral_witnesses(const ChoiMatrix& c, double tol);

// Re Tr(W C). Throws PreconditionError if the imaginary part exceeds 1e-10.
double expectation(const WitnessOperator& w, const ChoiMatrix& c);

// Orthonormal traceless Hermitian operators F_k, Tr(F_j F_k) = delta_jk
// (generalized Gell-Mann matrices over sqrt(2)).
std::vector<CMatrix> traceless_hermitian_basis(std::size_t dim);

// Choi(1 + eps * sum_a rates[a] D[ops[a]]).
ChoiMatrix fixed_basis_choi(const MarkovianFamily& fam, const std::vector<double>& rates);

NearestMCSResult nearest_mcs_fixed_basis(const ChoiMatrix& cn, const MarkovianFamily& fam);
NearestMCSResult nearest_mcs_full_gksl(const ChoiMatrix& cn, std::size_t dim, double eps,
                                       const FullGkslOptions& opts = {});

WitnessOperator theorem3_witness(const ChoiMatrix& cn, const ChoiMatrix& cm_star);

// First-order Choi state of a random Markovian generator: random operator count,
// with or without a Hamiltonian, occasionally purely unitary.
ChoiMatrix sample_markovian_choi(std::size_t dim, double eps, std::uint64_t seed);

struct VerifyResult {
    double min_expectation = 0.0;
    std::size_t violations = 0;  // samples with expectation < -1e-8
};

VerifyResult verify_witness(const WitnessOperator& w, std::size_t dim, double eps,
                            std::size_t n_samples, std::uint64_t seed,
                            Exec exec = Exec::parallel);

struct UniquenessResult {
    double max_lhs = 0.0;
    bool holds = true;  // max_lhs <= 1e-8
};

// Max over sampled Markovian C_M of Re Tr[(C_N - C*)(C_M - C*)]. With `family`
// set, samples are drawn from that fixed-basis family (rates uniform on [0, 2]).
UniquenessResult uniqueness_check(const ChoiMatrix& cn, const ChoiMatrix& cm_star,
                                  std::size_t dim, double eps, std::size_t n_samples,
                                  std::uint64_t seed,
                                  const std::optional<MarkovianFamily>& family = std::nullopt,
                                  Exec exec = Exec::parallel);

}  // namespace nmwit
