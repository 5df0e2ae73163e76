#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ergocert/bounds.hpp"
#include "ergocert/certify.hpp"
#include "ergocert/error.hpp"
#include "ergocert/random_walk.hpp"

using namespace ergocert;

namespace {

constexpr double kA = 6.9561523129081943816;
constexpr double kK = 5.7523174749678289595;
constexpr double kB = 5.9561523129081943816;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Walk : ::testing::Test {
    RandomWalkSpec spec = reference_walk();
    GammaSolution sol = solve_gamma_hat(spec);
    DriftCertificate drift = drift_params(spec, sol);
    CoreConstants core = core_constants(drift, drift.delta);
    DiscreteKernel K = make_kernel(spec);
    WeightSequence V = WeightSequence::geometric(sol.gamma_hat);

    LevelRecord level(std::size_t k, std::optional<double> theta, std::optional<double> r) const {
        CertificationParams p;
        p.rho_k = 0.75;
        p.vartheta = theta;
        p.r_k = r;
        return analyse_level(K, V, core, std::nullopt, p, k);
    }
};

}  // namespace

TEST(Core, Substitution) {
    const auto c = core_constants(DriftCertificate{0.5, 0.5, 0, true}, 0.5);
    EXPECT_DOUBLE_EQ(c.A, 2.0);
    EXPECT_DOUBLE_EQ(c.K_const, 2.0);
    EXPECT_DOUBLE_EQ(c.B, 1.0);
    EXPECT_DOUBLE_EQ(c.hat_alpha, 0.5);
}

TEST(Core, SmallLLimit) {
    const auto c = core_constants(DriftCertificate{0.3, 1e-12, 0, true}, 0.1);
    EXPECT_NEAR(c.A, 1.0, 1e-11);
    EXPECT_NEAR(c.B, 0.0, 1e-11);
    EXPECT_DOUBLE_EQ(c.K_const, 1.0);
    EXPECT_DOUBLE_EQ(c.hat_alpha, 0.3);
}

TEST_F(Walk, CoreConstants) {
    EXPECT_NEAR(core.A, kA, 1e-11);
    EXPECT_NEAR(core.K_const, kK, 1e-11);
    EXPECT_NEAR(core.B, kB, 1e-11);
}

TEST(Ress, AtomCase) { EXPECT_DOUBLE_EQ(ress_bound_drift_minorization(0.4, 1.0, 0.3, 2.0), 0.4); }

TEST(Ress, Substitution) {
    EXPECT_NEAR(ress_bound_drift_minorization(0.5, 1.0, 0.2, 0.3), 0.8 / 0.9, 1e-15);
}

TEST(Ress, MonotoneAndLimit) {
    double prev = 0.0;
    for (double L = 0.0; L < 50.0; L += 0.5) {
        const double v = ress_bound_drift_minorization(0.5, L, 0.2, 0.3);
        EXPECT_GE(v, prev);
        EXPECT_LT(v, 1.0);
        prev = v;
    }
    EXPECT_GT(ress_bound_drift_minorization(0.5, 1e12, 0.2, 0.3), 1.0 - 1e-9);
    prev = 1.0;
    for (double nuV = 0.2; nuV < 5.0; nuV += 0.1) {
        const double v = ress_bound_drift_minorization(0.5, 3.0, 0.2, nuV);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(Ress, Iterate) {
    EXPECT_DOUBLE_EQ(ress_bound_iterate(0.5, 1.0, 0.2, 0.3, 1), ress_bound_drift_minorization(0.5, 1.0, 0.2, 0.3));
    EXPECT_NEAR(ress_bound_iterate(std::pow(0.7, 3), 0.1, 0.5, 1.0, 3), 0.7, 1e-15);
    EXPECT_DOUBLE_EQ(ress_bound_iterate(0.25, 0.1, 0.5, 0.5, 2), 0.5);
}

TEST_F(Walk, KLConstantsN1) {
    const auto kl = kl_constants(core, 0.9, 0.09, 20.0);
    EXPECT_EQ(kl.n1, 2u);
    EXPECT_EQ(kl.n1, std::size_t(std::floor(std::log(2.0) / std::log(0.9 / core.hat_alpha))) + 1);
    EXPECT_FALSE(kl.eps0.has_value());
}

TEST_F(Walk, KLWindowGuards) {
    EXPECT_THROW(kl_constants(core, core.hat_alpha, 0.09, 20.0), InvalidWindow);
    EXPECT_THROW(kl_constants(core, 0.5, 0.09, 20.0), InvalidWindow);
    EXPECT_THROW(kl_constants(core, core.hat_alpha * (1 + 1e-14), 0.09, 20.0), InvalidWindow);
}

TEST_F(Walk, Eps0IsMinimum) {
    const auto kl = kl_constants(core, 0.9, 0.09, 20.0, true);
    ASSERT_TRUE(kl.eps0 && kl.eps2 && kl.eta);
    EXPECT_DOUBLE_EQ(*kl.eps0, std::min(kl.eps1, *kl.eps2));
    EXPECT_NEAR(*kl.eta, 1.0 - std::log(0.9) / std::log(core.hat_alpha), 1e-15);
}

TEST(WindowHBound, Values) {
    EXPECT_DOUBLE_EQ(window_H_bound(0.5, 3.0, 2.0, 0.7, 0.1), 35.0);
    EXPECT_NEAR(window_H_bound(0.5, 3.0, 2.0, 0.6, 0.1), 50.0, 1e-12);
    EXPECT_THROW(window_H_bound(0.5, 3.0, 2.0, 0.55, 0.1), InvalidWindow);
}

TEST(RateConstant, LargeEpsLimit) {
    const auto c = core_constants(DriftCertificate{0.5, 0.5, 0, true}, 0.5);
    EXPECT_NEAR(rate_constant(c, 0.8, 3, 1e300), 4.0 * 2.0 / (0.512 * 0.2), 1e-9);
}

TEST_F(Walk, Table2RatePipeline) {
    const auto r25 = level(25, 0.09, 0.9);
    const auto r45 = level(45, 0.09, 0.9);
    EXPECT_EQ(r25.k1, 20u);
    EXPECT_EQ(r45.k1, 20u);
    EXPECT_LT(rel(r25.c_k, 4.715e5), 0.05);
    EXPECT_LT(rel(r45.c_k, 4.816e5), 0.05);
    EXPECT_LT(rel(*r25.tv_from_rate, 1.112e-1), 0.05);
    EXPECT_LT(rel(*r45.tv_from_rate, 1.946e-8), 0.05);
    EXPECT_EQ(r45.kl.n1, 2u);
    EXPECT_EQ(r45.kl.n2, 30u);
}

TEST_F(Walk, Table1TradeOff) {
    const double r[] = {0.87, 0.78, 0.76};
    const double theta[] = {0.023, 0.020, 0.0095};
    const double published[] = {1.924e7, 4.610e11, 1.348e14};
    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto rec = level(45, theta[i], r[i]);
        EXPECT_LT(rel(rec.c_k, published[i]), 0.10) << r[i];
        EXPECT_GT(rec.c_k, prev);
        prev = rec.c_k;
    }
}

TEST_F(Walk, DirectTvBound) {
    EXPECT_LT(rel(level(25, 0.09, 0.9).tv_direct, 5.712e-5), 0.05);
    EXPECT_LT(rel(level(45, 0.09, 0.9).tv_direct, 1.733e-11), 0.05);
    // Leading order ln V(k) / V(k) with C and rho held fixed.
    const double a = tv_bound_direct(200, 4.0, 0.75, core, V);
    const double b = tv_bound_direct(400, 4.0, 0.75, core, V);
    EXPECT_NEAR(b / a, (V.log_value(400) / V.value(400)) / (V.log_value(200) / V.value(200)), 1e-2 * b / a);
}

TEST_F(Walk, RateTvBoundGate) {
    const std::size_t nK = n_K(core, V);
    EXPECT_EQ(nK, 3u);
    EXPECT_GE(V.value(nK), core.K_const);
    EXPECT_LT(V.value(nK - 1), core.K_const);
    EXPECT_THROW(tv_bound_from_rate(nK - 1, 4.7e5, 0.9, core, V), BelowNK);
    EXPECT_NO_THROW(tv_bound_from_rate(nK, 4.7e5, 0.9, core, V));
}

TEST_F(Walk, GeneralBoundSpecialCases) {
    const double first = 0.01;
    const double expect1 = first + core.L / (1 - core.delta) * 2 * 3.0 / 0.8;
    EXPECT_NEAR(tv_bound_general(Direction::forward, 1.0, 0.8, 3.0, core, first), expect1, 1e-14);
    EXPECT_NEAR(tv_bound_general(Direction::backward, 1e-300, 0.8, 3.0, core, first), first, 1e-12);
}

TEST_F(Walk, GeneralBoundReproducesDirectBound) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> kd(3, 80);
    std::uniform_real_distribution<double> rd(0.63, 0.99), cd(1.0, 50.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t k = kd(rng);
        const double rho = rd(rng), C = cd(rng);
        const double first = core.L / ((1 - core.delta) * V.value(k));
        const double g = tv_bound_general(Direction::backward, DeltaEstimate::discrete(k, core, V), rho, C, core, first);
        const double d = tv_bound_direct(k, C, rho, core, V);
        EXPECT_LE(rel(g, d), 1e-12);
    }
}

TEST(PnBound, Formula) {
    EXPECT_DOUBLE_EQ(pn_bound(0, 10.0, 0.5), 5.0);
    // c r^{n+1} evaluated through logarithms.
    EXPECT_NEAR(pn_bound(300, 1.675e6, 0.925), std::exp(std::log(1.675e6) + 301 * std::log(0.925)), 1e-16);
    EXPECT_NEAR(pn_bound(300, 1.675e6, 0.925), 1.0777e-4, 1e-7);
}

TEST_F(Walk, NForEpsilonWithGridVartheta) {
    const auto rec = level(35, std::nullopt, 0.9);
    EXPECT_GT(rec.analysis.vartheta, 0.0975);
    EXPECT_LT(rec.analysis.vartheta, 0.1);
    EXPECT_EQ(n_for_epsilon(1e-2, rec.c_k, 0.9, core, V), 28u);
    EXPECT_EQ(n_for_epsilon(1e-4, rec.c_k, 0.9, core, V), 34u);
    EXPECT_EQ(n_for_epsilon(1e-6, rec.c_k, 0.9, core, V), 40u);
}

TEST_F(Walk, NForEpsilonEdges) {
    const std::size_t nK = n_K(core, V);
    EXPECT_EQ(n_for_epsilon(1e300, 4.7e5, 0.9, core, V), nK);
    EXPECT_THROW(n_for_epsilon(1e-200, 4.7e5, 0.9, core, V, 50), NotReached);
}

TEST_F(Walk, K1Threshold) {
    EXPECT_EQ(level(45, 0.09, 0.9).k1, 20u);
    EXPECT_EQ(k1_threshold(10.0 * core.K_const, core, V), 0u);
}

TEST_F(Walk, K1ClosedFormMatchesDirectMinimum) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> le(-40.0, 2.0), lg(0.05, 3.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const double eps1 = std::pow(10.0, le(rng));
        const auto W = WeightSequence::geometric(1.0 + lg(rng));
        const double target = core.K_const / eps1;
        std::size_t direct = 0;
        while (W.value(direct) < target) ++direct;
        EXPECT_EQ(k1_threshold(eps1, core, W), direct);
    }
}

TEST_F(Walk, ReportProvenanceIsComplete) {
    const auto rec = level(25, 0.09, 0.9);
    const BoundReport report(25, core, rec.analysis, rec.kl, V);
    std::set<std::string> names;
    for (const auto& p : report.provenance()) {
        EXPECT_FALSE(p.formula.empty()) << p.name;
        EXPECT_TRUE(std::isfinite(p.value)) << p.name;
        EXPECT_TRUE(names.insert(p.name).second) << p.name;
    }
    for (const char* required : {"delta", "L", "A", "K", "B", "hat_alpha", "C_k", "eps1", "c_k", "k1", "n_K",
                                 "tv_direct", "tv_from_rate"}) {
        EXPECT_TRUE(names.count(required)) << required;
    }
    EXPECT_EQ(report.n_K(), n_K(core, V));
    EXPECT_DOUBLE_EQ(report.c_k(), rec.c_k);
}

TEST_F(Walk, RateBoundEventuallyDecreasing) {
    const auto rec = level(25, 0.09, 0.9);
    for (std::size_t n = 5; n < 300; ++n) {
        EXPECT_LT(tv_bound_from_rate(n + 1, rec.c_k, 0.9, core, V), tv_bound_from_rate(n, rec.c_k, 0.9, core, V));
    }
}
