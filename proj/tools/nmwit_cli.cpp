// nmwit: command-line front end.
//
// Exit codes: 0 ok / Markovian, 1 input error, 2 nothing to witness,
// 3 non-Markovianity or violations found, 4 solver did not converge.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nmwit/choi.hpp"
#include "nmwit/errors.hpp"
#include "nmwit/geometry.hpp"
#include "nmwit/io.hpp"
#include "nmwit/witness.hpp"

namespace {

using namespace nmwit;
using io::json;

enum Exit : int { ok = 0, input_error = 1, nothing_to_witness = 2, found = 3, solver_failed = 4 };

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        std::cout.flush();
    } else {
        io::write_atomic(out_path, content);
    }
}

void emit_json(const std::string& out_path, const json& j) { emit(out_path, j.dump(2) + "\n"); }

struct AnalyzeArgs {
    std::string spec, out, format = "json";
    double t0 = 0.0, t1 = 1.0, eps = 1e-3;
    std::optional<double> tol;
    std::size_t steps = 100;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const auto gen = io::load_channel_spec(a.spec);
    const double tol = a.tol.value_or(default_tolerance(a.eps));
    const auto report = scan(gen, a.t0, a.t1, a.steps, a.eps, tol);
    if (a.format == "csv") {
        emit(a.out, io::scan_report_csv(report));
    } else {
        emit_json(a.out, io::scan_report_json(report, {std::nullopt, a.eps, "analyze", {}}));
    }
    return report.nm_intervals.empty() ? ok : found;
}

struct WitnessArgs {
    std::string spec, out, mode = "theorem3-gksl";
    double t = 0.0, eps = 1e-3;
    std::optional<double> tol;
    std::size_t max_iter = FullGkslOptions{}.max_iter;
};

int cmd_witness(const WitnessArgs& a) {
    const auto gen = io::load_channel_spec(a.spec);
    const double tol = a.tol.value_or(default_tolerance(a.eps));
    const ChoiMatrix cn = first_order_choi(gen, a.t, a.eps);
    const auto cls = classify(cn, tol);

    json j;
    j["metadata"] = io::metadata_json({std::nullopt, a.eps, "witness", {}});
    j["mode"] = a.mode;
    j["t"] = a.t;
    j["eps"] = a.eps;
    j["tol"] = tol;
    j["dim"] = gen.dim;
    j["classification"] = {{"min_eigenvalue", cls.min_eigenvalue},
                           {"negative_eigenvalues", cls.negative_eigenvalues},
                           {"is_markovian", cls.is_markovian}};
    if (cls.is_markovian) {
        std::cerr << "nothing to witness: Choi state at t=" << a.t << " is PSD within tol " << tol
                  << '\n';
        emit_json(a.out, j);
        return nothing_to_witness;
    }

    if (a.mode == "spectral") {
        const auto ws = spectral_witnesses(cn, tol);
        json all = json::array();
        for (const auto& w : ws) {
            json wj = io::witness_json(w);
            wj["expectation_on_cn"] = expectation(w, cn);
            all.push_back(std::move(wj));
        }
        j["witness"] = all.front();
        if (all.size() > 1) j["witnesses"] = std::move(all);
        emit_json(a.out, j);
        return ok;
    }

    NearestMCSResult nearest;
    json solver;
    if (a.mode == "theorem3-fixed") {
        MarkovianFamily fam;
        fam.dim = gen.dim;
        fam.basis_ops = gen.ops;
        fam.eps = a.eps;
        fam.t = a.t;
        nearest = nearest_mcs_fixed_basis(cn, fam);
        solver["rates"] = nearest.rates;
        solver["degenerate"] = nearest.degenerate;
    } else {
        FullGkslOptions opts;
        opts.max_iter = a.max_iter;
        nearest = nearest_mcs_full_gksl(cn, gen.dim, a.eps, opts);
        solver["hamiltonian_coeffs"] = nearest.hamiltonian_coeffs;
        solver["kossakowski"] = io::matrix_to_json(nearest.kossakowski);
    }
    solver["iterations"] = nearest.iterations;
    solver["kkt_ok"] = nearest.kkt_ok;
    solver["gradient_norm"] = nearest.gradient_norm;
    j["solver"] = std::move(solver);

    const auto w = theorem3_witness(cn, nearest.choi_star);
    json wj = io::witness_json(w);
    wj["expectation_on_cn"] = expectation(w, cn);
    j["witness"] = std::move(wj);
    j["c0"] = hs_inner(nearest.choi_star.matrix, cn.matrix - nearest.choi_star.matrix).real();
    j["residual"] = nearest.residual;
    j["residual_squared"] = nearest.residual * nearest.residual;
    j["choi_star"] = io::matrix_to_json(nearest.choi_star.matrix);
    emit_json(a.out, j);
    if (!nearest.kkt_ok) {
        std::cerr << "solver did not converge after " << nearest.iterations << " iterations\n";
        return solver_failed;
    }
    return ok;
}

struct VerifyArgs {
    std::string witness, out;
    std::optional<std::size_t> dim;
    double eps = 1e-3;
    std::size_t n = 10000;
    std::uint64_t seed = 0;
};

int cmd_verify(const VerifyArgs& a) {
    const CMatrix m = io::load_witness_matrix(io::read_file(a.witness));
    if (!m.is_square()) throw ShapeError("witness matrix is not square");
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(m.rows()))));
    const std::size_t dim = a.dim.value_or(side);
    if (dim * dim != m.rows())
        throw ShapeError("witness matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected dim^2 x dim^2");
    if (!is_hermitian(m))
        throw PreconditionError("witness matrix is not Hermitian (defect " +
                                std::to_string(hermiticity_defect(m)) + ")");
    const auto r = verify_witness({m, WitnessKind::theorem3, a.witness}, dim, a.eps, a.n, a.seed);
    json j;
    j["metadata"] = io::metadata_json({a.seed, a.eps, "verify", {}});
    j["dim"] = dim;
    j["n_samples"] = a.n;
    j["min_expectation"] = r.min_expectation;
    j["violations"] = r.violations;
    emit_json(a.out, j);
    return r.violations == 0 ? ok : found;
}

struct GeometryArgs {
    std::string probe, spec, out;
    std::size_t dim = 2, n = 1000;
    double eps = 1e-3, t = 0.0;
    std::uint64_t seed = 0;
};

int cmd_geometry(const GeometryArgs& a) {
    ProbeReport report;
    if (a.probe == "convexity") {
        report = convexity_probe(a.dim, a.eps, a.n, a.seed);
    } else if (a.probe == "hsnorm") {
        report = hs_norm_probe(a.dim, a.eps, a.n, a.seed);
    } else if (a.probe == "extreme") {
        report = extreme_point_probe(a.dim, a.eps, a.n, a.seed);
    } else {
        ChoiMatrix cn;
        std::size_t dim = a.dim;
        if (!a.spec.empty()) {
            const auto gen = io::load_channel_spec(a.spec);
            dim = gen.dim;
            cn = first_order_choi(gen, a.t, a.eps);
        } else {
            cn = first_order_choi(random_nm_generator(a.dim, a.eps, a.seed), 0.0, a.eps);
        }
        if (classify(cn, default_tolerance(a.eps)).is_markovian) {
            std::cerr << "nothing to witness: Choi state is Markovian\n";
            return nothing_to_witness;
        }
        report = separation_demo(cn, dim, a.eps, a.n, a.seed);
    }
    emit_json(a.out, io::probe_report_json(report, {a.seed, a.eps, "geometry", {}}));
    return report.failures == 0 ? ok : found;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovianity witnesses from small-time Choi states"};
    app.require_subcommand(1);
    auto positive = CLI::PositiveNumber;

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Scan a channel spec for CP-divisibility breakdown");
    analyze->add_option("--spec", an.spec, "Channel spec JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--t0", an.t0, "Start time")->capture_default_str();
    analyze->add_option("--t1", an.t1, "End time")->capture_default_str();
    analyze->add_option("--steps", an.steps, "Grid intervals")->capture_default_str()->check(positive);
    analyze->add_option("--eps", an.eps, "Step size")->capture_default_str()->check(positive);
    analyze->add_option("--tol", an.tol, "Eigenvalue tolerance [max(1e-9, 10 eps^2)]");
    analyze->add_option("--out", an.out, "Output file (stdout if omitted)");
    analyze->add_option("--format", an.format, "json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));

    WitnessArgs wi;
    auto* witness = app.add_subcommand("witness", "Construct a witness at one instant");
    witness->add_option("--spec", wi.spec, "Channel spec JSON")->required()->check(CLI::ExistingFile);
    witness->add_option("--t", wi.t, "Time")->capture_default_str();
    witness->add_option("--eps", wi.eps, "Step size")->capture_default_str()->check(positive);
    witness->add_option("--tol", wi.tol, "Eigenvalue tolerance [max(1e-9, 10 eps^2)]");
    witness->add_option("--mode", wi.mode, "spectral, theorem3-fixed or theorem3-gksl")
        ->capture_default_str()
        ->check(CLI::IsMember({"spectral", "theorem3-fixed", "theorem3-gksl"}));
    witness->add_option("--max-iter", wi.max_iter, "Projected-gradient iteration cap")
        ->capture_default_str()
        ->check(positive);
    witness->add_option("--out", wi.out, "Output file (stdout if omitted)");
    witness->add_option("--format")->description("json only")->check(CLI::IsMember({"json"}));

    VerifyArgs ve;
    auto* verify = app.add_subcommand("verify", "Check a witness on sampled Markovian Choi states");
    verify->add_option("--witness", ve.witness, "Witness JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--dim", ve.dim, "System dimension (inferred from the matrix if omitted)");
    verify->add_option("--eps", ve.eps, "Step size")->capture_default_str()->check(positive);
    verify->add_option("--n", ve.n, "Samples")->capture_default_str();
    verify->add_option("--seed", ve.seed, "Sampling seed")->required();
    verify->add_option("--out", ve.out, "Output file (stdout if omitted)");
    verify->add_option("--format")->description("json only")->check(CLI::IsMember({"json"}));

    GeometryArgs ge;
    auto* geometry = app.add_subcommand("geometry", "Run a Monte-Carlo geometry probe");
    geometry->add_option("--probe", ge.probe, "convexity, hsnorm, extreme or separation")
        ->required()
        ->check(CLI::IsMember({"convexity", "hsnorm", "extreme", "separation"}));
    geometry->add_option("--dim", ge.dim, "System dimension")->capture_default_str();
    geometry->add_option("--eps", ge.eps, "Step size")->capture_default_str()->check(positive);
    geometry->add_option("--n", ge.n, "Trials")->capture_default_str();
    geometry->add_option("--seed", ge.seed, "Trial seed")->required();
    geometry->add_option("--spec", ge.spec, "Channel spec for the separation probe")
        ->check(CLI::ExistingFile);
    geometry->add_option("--t", ge.t, "Time for --spec")->capture_default_str();
    geometry->add_option("--out", ge.out, "Output file (stdout if omitted)");
    geometry->add_option("--format")->description("json only")->check(CLI::IsMember({"json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : input_error;
    }

    try {
        if (*analyze) return cmd_analyze(an);
        if (*witness) return cmd_witness(wi);
        if (*verify) return cmd_verify(ve);
        return cmd_geometry(ge);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    }
}
