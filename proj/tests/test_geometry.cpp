#include <gtest/gtest.h>

#include <cmath>

#include "nmwit/errors.hpp"
#include "nmwit/geometry.hpp"
#include "nmwit/witness.hpp"

using namespace nmwit;

namespace {

void expect_same_records(const ProbeReport& a, const ProbeReport& b) {
    ASSERT_EQ(a.details.size(), b.details.size());
    for (std::size_t i = 0; i < a.details.size(); ++i) {
        EXPECT_EQ(a.details[i].seed, b.details[i].seed);
        EXPECT_EQ(a.details[i].value, b.details[i].value);
    }
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.worst_value, b.worst_value);
}

}  // namespace

TEST(Geometry, MixtureChoiIsConvexCombination) {
    const auto g1 = random_markovian(2, 4, 1);
    const auto g2 = random_markovian(2, 4, 2);
    const double eps = 1e-4;
    for (double p : {0.0, 0.25, 1.0}) {
        const auto mixed = first_order_choi(mix_generators(g1, g2, p, 0.0), 0.0, eps).matrix;
        CMatrix expected = p * first_order_choi(g1, 0.0, eps).matrix;
        expected += (1.0 - p) * first_order_choi(g2, 0.0, eps).matrix;
        EXPECT_LT(max_abs_diff(mixed, expected), 1e-12);
    }
    EXPECT_LT(max_abs_diff(first_order_choi(mix_generators(g1, g2, 1.0, 0.0), 0.0, eps).matrix,
                           first_order_choi(g1, 0.0, eps).matrix),
              1e-15);
}

TEST(Geometry, ConvexityProbe) {
    const auto r = convexity_probe(2, 1e-4, 2000, 11);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_GE(r.worst_value, -1e-12);
    expect_same_records(r, convexity_probe(2, 1e-4, 2000, 11, Exec::serial));
    EXPECT_EQ(convexity_probe(3, 1e-4, 200, 11).failures, 0u);
    EXPECT_THROW(convexity_probe(2, 0.0, 10, 1), DomainError);
    EXPECT_THROW(convexity_probe(2, 1e-4, 0, 1), DomainError);
}

TEST(Geometry, HsNormClosedForms) {
    EXPECT_DOUBLE_EQ(hs_norm(choi_of_channel(identity_superoperator(2)).matrix), 1.0);
    const double ge = 1e-3;
    const auto c = first_order_choi(builtin_dephasing(RateFunction::constant(1.0)), 0.0, ge);
    EXPECT_NEAR(hs_norm(c.matrix), std::sqrt((1 - ge) * (1 - ge) + ge * ge), 1e-15);
    EXPECT_LE(std::abs(hs_norm(c.matrix) - 1.0), 1e-3);
}

TEST(Geometry, HsNormProbe) {
    for (double eps : {1e-3, 1e-4}) {
        const auto r = hs_norm_probe(2, eps, 500, 3);
        EXPECT_EQ(r.failures, 0u);
        EXPECT_GT(r.worst_value, 0.0);
        EXPECT_FALSE(r.note.empty());
    }
    expect_same_records(hs_norm_probe(3, 1e-3, 100, 4), hs_norm_probe(3, 1e-3, 100, 4, Exec::serial));
}

TEST(Geometry, HsNormDeviationScalesLinearly) {
    const auto halving = hs_norm_scaling_probe(2, 1e-3, 5e-4, 300, 8);
    EXPECT_EQ(halving.failures, 0u);
    const auto decade = hs_norm_scaling_probe(3, 1e-3, 1e-4, 300, 8);
    EXPECT_EQ(decade.failures, 0u);
    EXPECT_LT(decade.worst_value, 0.2);
}

TEST(Geometry, ExtremePointProbe) {
    const auto r = extreme_point_probe(2, 1e-3, 300, 21);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_GT(r.worst_value, 1e-8);
    for (const auto& d : r.details) EXPECT_NEAR(d.value, 1.0, 1e-10);
    expect_same_records(r, extreme_point_probe(2, 1e-3, 300, 21, Exec::serial));
    EXPECT_THROW(extreme_point_probe(2, 1e-3, 1, 21), DomainError);
}

TEST(Geometry, MixedChoiIsNotPure) {
    // Depolarizing-type Pauli channel with equal rates g.
    const double g = 0.5, eps = 1e-2;
    const auto c = first_order_choi(builtin_pauli(RateFunction::constant(g), RateFunction::constant(g),
                                                  RateFunction::constant(g)),
                                    0.0, eps);
    const double expected = (1 - 3 * g * eps) * (1 - 3 * g * eps) + 3 * (g * eps) * (g * eps);
    EXPECT_NEAR(purity(c), expected, 1e-15);
    EXPECT_LT(purity(c), 1.0 - 1e-10);
}

TEST(Geometry, SeparationDemoOnPauliInstance) {
    const double eps = 1e-3;
    const auto cn = first_order_choi(builtin_pauli(RateFunction::constant(1), RateFunction::constant(1),
                                                   RateFunction::constant(-0.3)),
                                     0.0, eps);
    const auto r = separation_demo(cn, 2, eps, 3000, 5);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_GE(r.worst_value, -1e-8);
    double on_cn = 0.0;
    for (const auto& [k, v] : r.summary)
        if (k == "expectation_on_cn") on_cn = v;
    EXPECT_NEAR(on_cn, -0.12 * eps * eps, 1e-10 * 0.12 * eps * eps);

    const auto deph = first_order_choi(builtin_dephasing(RateFunction::constant(-1.0)), 0.0, eps);
    EXPECT_EQ(separation_demo(deph, 2, eps, 1000, 6).failures, 0u);

    const auto markovian = first_order_choi(builtin_dephasing(RateFunction::constant(1.0)), 0.0, eps);
    EXPECT_THROW(separation_demo(markovian, 2, eps, 10, 1), PreconditionError);
}

TEST(Geometry, RandomNonMarkovianGeneratorIsNonMarkovian) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto gen = random_nm_generator(2, 1e-3, seed);
        EXPECT_FALSE(classify(first_order_choi(gen, 0.0, 1e-3), default_tolerance(1e-3)).is_markovian);
        std::size_t negative = 0;
        for (const auto& r : gen.rates) negative += r(0.0) < 0.0;
        EXPECT_EQ(negative, 1u);
    }
}
