#include "nmwit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nmwit/errors.hpp"
#include "nmwit/witness.hpp"

namespace nmwit {

namespace {

void require_trials(std::size_t n, const char* op) {
    if (n < 1) {
        std::ostringstream os;
        os << op << ": trial count must be >= 1";
        throw DomainError(os.str());
    }
}

void require_eps(double eps, const char* op) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        std::ostringstream os;
        os << op << ": eps must be finite and > 0";
        throw DomainError(os.str());
    }
}

std::vector<TrialRecord> make_records(std::size_t n, std::uint64_t seed) {
    std::vector<TrialRecord> records(n);
    for (std::size_t i = 0; i < n; ++i) records[i].seed = derive_seed(seed, i);
    return records;
}

double hs_deviation(const LindbladGenerator& gen, double eps) {
    return std::abs(hs_norm(first_order_choi(gen, 0.0, eps).matrix) - 1.0);
}

}  // namespace

LindbladGenerator random_nm_generator(std::size_t dim, double eps, std::uint64_t seed) {
    require_eps(eps, "random_nm_generator");
    const double tol = default_tolerance(eps);
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(derive_seed(seed, attempt));
        LindbladGenerator gen = random_markovian(dim, dim * dim, rng());
        std::uniform_int_distribution<std::size_t> pick(0, dim * dim - 1);
        std::uniform_real_distribution<double> negative(-1.0, -0.1);
        gen.rates[pick(rng)] = RateFunction::constant(negative(rng));
        if (!classify(first_order_choi(gen, 0.0, eps), tol).is_markovian) return gen;
    }
}

ProbeReport convexity_probe(std::size_t dim, double eps, std::size_t n_trials, std::uint64_t seed,
                            Exec exec) {
    require_eps(eps, "convexity_probe");
    require_trials(n_trials, "convexity_probe");
    ProbeReport report;
    report.probe_name = "convexity";
    report.n_trials = n_trials;
    report.tolerance = -1e-12;
    report.details = make_records(n_trials, seed);
    for_each_index(n_trials, exec, [&](std::size_t i) {
        std::mt19937_64 rng(report.details[i].seed);
        const auto g1 = random_markovian(dim, dim * dim, rng());
        const auto g2 = random_markovian(dim, dim * dim, rng());
        const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto mixed = first_order_choi(mix_generators(g1, g2, p, 0.0), 0.0, eps);
        report.details[i].value = hermitian_eig(mixed.matrix).eigenvalues.front();
    });
    report.worst_value = std::numeric_limits<double>::infinity();
    for (const auto& r : report.details) {
        report.worst_value = std::min(report.worst_value, r.value);
        if (r.value < report.tolerance) ++report.failures;
    }
    return report;
}

ProbeReport hs_norm_probe(std::size_t dim, double eps, std::size_t n_trials, std::uint64_t seed,
                          Exec exec) {
    require_eps(eps, "hs_norm_probe");
    require_trials(n_trials, "hs_norm_probe");
    ProbeReport report;
    report.probe_name = "hsnorm";
    report.n_trials = n_trials;
    report.details = make_records(n_trials, seed);
    std::vector<char> failed(n_trials, 0);
    for_each_index(n_trials, exec, [&](std::size_t i) {
        std::mt19937_64 rng(report.details[i].seed);
        const std::size_t n_ops = 1 + rng() % (dim * dim);
        LindbladGenerator gen = random_markovian(dim, n_ops, rng());
        // Odd trials are non-Markovian: one rate flipped negative.
        if (i % 2 == 1) {
            const std::size_t a = rng() % n_ops;
            gen.rates[a] = RateFunction::constant(-gen.rates[a](0.0) - 0.1);
        }
        if (rng() % 2 == 0) gen.hamiltonian = random_hamiltonian(dim, rng());
        const double bound = 10.0 * eps * hs_norm(gksl_superoperator(gen, 0.0).matrix);
        report.details[i].value = hs_deviation(gen, eps);
        failed[i] = report.details[i].value > bound;
    });
    for (std::size_t i = 0; i < n_trials; ++i) {
        report.worst_value = std::max(report.worst_value, report.details[i].value);
        report.failures += failed[i];
    }
    report.note =
        "boundedness of ||C||_2 is checked against 10*eps*||L||_2; closedness is not probed";
    return report;
}

ProbeReport hs_norm_scaling_probe(std::size_t dim, double eps, double eps_small,
                                  std::size_t n_trials, std::uint64_t seed, Exec exec) {
    require_eps(eps, "hs_norm_scaling_probe");
    require_eps(eps_small, "hs_norm_scaling_probe");
    require_trials(n_trials, "hs_norm_scaling_probe");
    ProbeReport report;
    report.probe_name = "hsnorm-scaling";
    report.n_trials = n_trials;
    report.tolerance = 0.2;
    report.details = make_records(n_trials, seed);
    const double expected = eps / eps_small;
    for_each_index(n_trials, exec, [&](std::size_t i) {
        std::mt19937_64 rng(report.details[i].seed);
        const std::size_t n_ops = 1 + rng() % (dim * dim);
        const auto gen = random_markovian(dim, n_ops, rng());
        report.details[i].value = hs_deviation(gen, eps) / hs_deviation(gen, eps_small);
    });
    for (const auto& r : report.details) {
        const double rel = std::abs(r.value / expected - 1.0);
        report.worst_value = std::max(report.worst_value, rel);
        if (!(rel <= report.tolerance)) ++report.failures;
    }
    report.summary = {{"expected_ratio", expected}};
    return report;
}

ProbeReport separation_demo(const ChoiMatrix& cn, std::size_t dim, double eps,
                            std::size_t n_samples, std::uint64_t seed, Exec exec) {
    require_eps(eps, "separation_demo");
    require_trials(n_samples, "separation_demo");
    const auto cls = classify(cn, default_tolerance(eps));
    if (cls.is_markovian) {
        std::ostringstream os;
        os << "separation_demo: Choi state is Markovian (min eigenvalue " << cls.min_eigenvalue
           << ")";
        throw PreconditionError(os.str());
    }
    const auto nearest = nearest_mcs_full_gksl(cn, dim, eps);
    const auto w = theorem3_witness(cn, nearest.choi_star);
    const double on_cn = expectation(w, cn);

    ProbeReport report;
    report.probe_name = "separation";
    report.n_trials = n_samples;
    report.tolerance = -1e-8;
    report.details = make_records(n_samples, seed);
    for_each_index(n_samples, exec, [&](std::size_t i) {
        report.details[i].value =
            expectation(w, sample_markovian_choi(dim, eps, report.details[i].seed));
    });
    report.worst_value = std::numeric_limits<double>::infinity();
    for (const auto& r : report.details) {
        report.worst_value = std::min(report.worst_value, r.value);
        if (r.value < report.tolerance) ++report.failures;
    }
    if (!(on_cn < 0.0)) ++report.failures;
    report.summary = {{"expectation_on_cn", on_cn},
                      {"residual", nearest.residual},
                      {"residual_squared", nearest.residual * nearest.residual},
                      {"solver_iterations", static_cast<double>(nearest.iterations)},
                      {"solver_converged", nearest.kkt_ok ? 1.0 : 0.0}};
    return report;
}

ProbeReport extreme_point_probe(std::size_t dim, double eps, std::size_t n_unitaries,
                                std::uint64_t seed, Exec exec) {
    if (n_unitaries < 2) throw DomainError("extreme_point_probe: n_unitaries must be >= 2");
    ProbeReport report;
    report.probe_name = "extreme";
    report.n_trials = n_unitaries;
    report.tolerance = 1e-10;
    report.details = make_records(n_unitaries, seed);
    std::vector<CMatrix> chois(n_unitaries);
    for_each_index(n_unitaries, exec, [&](std::size_t i) {
        chois[i] =
            choi_of_channel(random_unitary_channel(dim, report.details[i].seed), 0.0, eps).matrix;
        report.details[i].value = hs_inner(chois[i], chois[i]).real();
    });
    std::vector<double> row_min(n_unitaries, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> row_close(n_unitaries, 0);
    for_each_index(n_unitaries, exec, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n_unitaries; ++j) {
            const double dist = hs_norm(chois[i] - chois[j]);
            row_min[i] = std::min(row_min[i], dist);
            if (dist <= 1e-8) ++row_close[i];
        }
    });
    std::size_t impure = 0;
    double worst_purity = 0.0;
    for (std::size_t i = 0; i < n_unitaries; ++i) {
        const double dev = std::abs(report.details[i].value - 1.0);
        worst_purity = std::max(worst_purity, dev);
        if (dev > report.tolerance) ++impure;
        report.failures += row_close[i];
    }
    report.failures += impure;
    report.worst_value = *std::min_element(row_min.begin(), row_min.end());
    report.summary = {{"max_purity_deviation", worst_purity},
                      {"impure", static_cast<double>(impure)},
                      {"distinct_pure_chois", static_cast<double>(n_unitaries - impure)}};
    return report;
}

}  // namespace nmwit
