// choi.hpp: Choi–Jamiołkowski duality and instantaneous Markovianity tests

#pragma once

#include <utility>
#include <vector>

#include "nmwit/channels.hpp"
#include "nmwit/linalg.hpp"
#include "nmwit/parallel.hpp"

namespace nmwit {

// Choi state (1 (x) Lambda)|phi><phi| of a channel over [t, t + eps].
// Hermitian and trace one; positivity is what classify() tests.
struct ChoiMatrix {
    std::size_t dim = 2;
    CMatrix matrix;
    double t = 0.0;
    double eps = 0.0;
};

struct NMClassification {
    double min_eigenvalue = 0.0;
    std::vector<double> negative_eigenvalues;
    double trace_norm_deficit = 0.0;  // ||C||_1 - 1
    bool is_markovian = true;
};

struct ScanReport {
    std::vector<double> grid;
    std::vector<NMClassification> points;
    std::vector<std::pair<double, double>> nm_intervals;  // half-open (start, end]
    double integrated_measure = 0.0;
    double eps = 0.0;
    double tol = 0.0;
};

// Eigenvalue tolerance that absorbs the O(eps^2) first-order truncation error.
double default_tolerance(double eps);

// |phi><phi| with |phi> = d^{-1/2} sum_i |ii>.
CMatrix max_entangled_state(std::size_t dim);

// <ik|C|jl> = <k|Lambda(|i><j|)|l> / d : the map acts on the second factor.
ChoiMatrix choi_of_channel(const SuperOperator& s, double t = 0.0, double eps = 0.0);
SuperOperator channel_of_choi(const ChoiMatrix& c);

ChoiMatrix first_order_choi(const LindbladGenerator& gen, double t, double eps);
ChoiMatrix exact_choi(const LindbladGenerator& gen, double t, double eps);

NMClassification classify(const ChoiMatrix& c, double tol);

double purity(const ChoiMatrix& c);

// Classifies first-order Choi states on the grid t0 + k (t1 - t0) / steps,
// k = 0..steps. Each non-Markovian grid point owns the cell (t_k - dt, t_k].
ScanReport scan(const LindbladGenerator& gen, double t0, double t1, std::size_t steps, double eps,
                double tol, Exec exec = Exec::parallel);

}  // namespace nmwit
