// geometry.hpp: Monte-Carlo probes of the Markovian Choi set
//
// Every trial draws from derive_seed(seed, trial), so serial and parallel runs
// produce identical reports.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nmwit/channels.hpp"
#include "nmwit/choi.hpp"
#include "nmwit/parallel.hpp"

namespace nmwit {

struct TrialRecord {
    std::uint64_t seed = 0;
    double value = 0.0;
};

struct ProbeReport {
    std::string probe_name;
    std::size_t n_trials = 0;
    std::size_t failures = 0;
    double worst_value = 0.0;
    double tolerance = 0.0;
    std::vector<TrialRecord> details;
    std::vector<std::pair<std::string, double>> summary;
    std::string note;
};

// Random generator with d^2 jump operators and exactly one rate drawn from
// [-1, -0.1], redrawn until its first-order Choi state at eps is non-Markovian
// under default_tolerance(eps).
LindbladGenerator random_nm_generator(std::size_t dim, double eps, std::uint64_t seed);

// Mixtures p*L1 + (1-p)*L2 of full-rank Markovian generators; value is the
// smallest eigenvalue of the mixed first-order Choi state, failure below -1e-12.
ProbeReport convexity_probe(std::size_t dim, double eps, std::size_t n_trials, std::uint64_t seed,
                            Exec exec = Exec::parallel);

// | ||C||_2 - 1 | over Markovian and non-Markovian first-order Choi states;
// failure when it exceeds 10 * eps * ||L||_2.
ProbeReport hs_norm_probe(std::size_t dim, double eps, std::size_t n_trials, std::uint64_t seed,
                          Exec exec = Exec::parallel);

// Per trial, dev(eps) / dev(eps_small) for one dissipative Markovian generator.
// Linear scaling gives eps / eps_small; failure outside 20% of that.
ProbeReport hs_norm_scaling_probe(std::size_t dim, double eps, double eps_small,
                                  std::size_t n_trials, std::uint64_t seed,
                                  Exec exec = Exec::parallel);

// Nearest full-GKSL Markovian state, its witness, and the witness expectation
// over sampled Markovian Choi states. Throws PreconditionError if cn is Markovian.
ProbeReport separation_demo(const ChoiMatrix& cn, std::size_t dim, double eps,
                            std::size_t n_samples, std::uint64_t seed, Exec exec = Exec::parallel);

// Choi states of Haar-random unitaries: purity 1 within 1e-10 and pairwise HS
// distance above 1e-8. worst_value is the minimum pairwise distance.
ProbeReport extreme_point_probe(std::size_t dim, double eps, std::size_t n_unitaries,
                                std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace nmwit
