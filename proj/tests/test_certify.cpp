#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "ergocert/app/config.hpp"
#include "ergocert/app/report_io.hpp"
#include "ergocert/certify.hpp"
#include "ergocert/error.hpp"

using namespace ergocert;

namespace {

app::ResolvedModel example_model() { return app::resolve(app::example_config()); }

CertificationRun example_run(const app::ResolvedModel& m) {
    return run_certification(m.kernel, m.V, m.core, std::nullopt, app::example_config().algorithm);
}

// Uniform rows on 0..3 and a deterministic step down from every state >= 4.
DiscreteKernel finite_support_kernel() {
    const Row uniform{{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}};
    return DiscreteKernel::homogeneous({uniform, uniform, uniform, uniform}, 1, {1.0, 0.0});
}

}  // namespace

TEST(Certify, ExampleAcceptsLevel25) {
    const auto m = example_model();
    const auto run = example_run(m);
    const auto& report = run.report();
    EXPECT_EQ(report.k(), 25u);
    EXPECT_EQ(report.k1(), 20u);
    ASSERT_EQ(run.trace.size(), 2u);
    EXPECT_FALSE(run.trace[0].gate_passed);
    EXPECT_EQ(run.trace[0].reason, "rejected: k < k1");
    EXPECT_EQ(run.trace[1].reason, "gate passed: k >= k1");
}

TEST(Certify, TraceIsMonotoneAndGateConsistent) {
    const auto m = example_model();
    const auto run = example_run(m);
    for (std::size_t i = 1; i < run.trace.size(); ++i) EXPECT_GT(run.trace[i].k, run.trace[i - 1].k);
    for (const auto& rec : run.analysed_levels()) {
        ASSERT_TRUE(rec.analyzed) << rec.reason;
        const bool threshold_met = m.V.value(rec.k) >= m.core.K_const / rec.kl.eps1;
        EXPECT_EQ(rec.gate_passed, threshold_met) << rec.k;
        EXPECT_EQ(rec.gate_passed, rec.k >= rec.k1) << rec.k;
    }
    EXPECT_EQ(run.analysed_levels().size(), 4u);
}

TEST(Certify, FiniteSupportTraceRecordsExactDelta) {
    const auto K = finite_support_kernel();
    const auto V = WeightSequence::geometric(2.0);
    const auto drift = verify_drift(K, V, 0.5, 3.25, 10);
    const auto core = core_constants(drift, 0.5);
    CertificationParams p;
    p.initial_k = 3;
    p.k_cap = 12;
    const auto run = run_certification(K, V, core, std::nullopt, p);
    ASSERT_FALSE(run.trace.empty());
    for (const auto& rec : run.trace) {
        EXPECT_DOUBLE_EQ(rec.delta_exact, 1.0 / V.value(rec.k + 1)) << rec.k;
        EXPECT_DOUBLE_EQ(rec.delta_bound, core.K_const / V.value(rec.k)) << rec.k;
        EXPECT_LE(rec.delta_exact, rec.delta_bound);
    }
}

TEST(Certify, SCapRejectionThenExhausted) {
    const auto m = example_model();
    auto p = app::example_config().algorithm;
    p.s_cap = 2;
    p.k_cap = 35;
    p.report_levels.clear();
    const auto run = run_certification(m.kernel, m.V, m.core, std::nullopt, p);
    ASSERT_FALSE(run.trace.empty());
    for (const auto& rec : run.trace) {
        EXPECT_FALSE(rec.analyzed);
        EXPECT_EQ(rec.reason.rfind("SCapExceeded", 0), 0u) << rec.reason;
    }
    EXPECT_FALSE(run.result.has_value());
    EXPECT_THROW(run.report(), Exhausted);
}

TEST(Oracle, BirthDeathStationaryLaw) {
    const auto cfg = app::load_config(ERGOCERT_SOURCE_DIR "/configs/birth_death.json");
    const auto m = app::resolve(cfg);
    const auto o = build_oracle(m.kernel, m.V, 80, 5);
    const double q = 3.0 / 7.0;
    for (std::size_t i = 0; i <= 80; ++i) {
        EXPECT_NEAR(static_cast<double>(o.pi_ref[i]), (1 - q) * std::pow(q, double(i)), 1e-10) << i;
    }
    EXPECT_NEAR(static_cast<double>(o.tail_mass(10)), std::pow(q, 11.0), 1e-12);
}

TEST(Oracle, SelfComparisonIsExact) {
    const auto m = example_model();
    const auto o = build_oracle(m.kernel, m.V, 40, 3);
    EXPECT_EQ(measured_tv(m.kernel, o, 40), 0.0);
    EXPECT_THROW(measured_tv(m.kernel, o, 41), InvalidArgument);
}

TEST(Oracle, PowerNormsStartAtTwoAndDecay) {
    const auto m = example_model();
    const auto o = build_oracle(m.kernel, m.V, 100, 60);
    ASSERT_EQ(o.pn_measurements.size(), 61u);
    EXPECT_GT(o.pn_measurements[0], 1.0);
    EXPECT_LT(o.pn_measurements[60], 1e-6);
}

TEST(Validate, ExampleRunIsSound) {
    const auto m = example_model();
    const auto run = example_run(m);
    const auto o = build_oracle(m.kernel, m.V, 400, 300);
    const auto summary = validate(run, o, m.kernel);
    EXPECT_EQ(summary.violations, 0u);
    EXPECT_GT(summary.min_ratio, 1.0);
    // Four direct bounds, three gate-passing rate bounds, 301 power norms.
    EXPECT_EQ(summary.margins.size(), 4u + 3u + 301u);
    EXPECT_NO_THROW(validate(run.report(), o, m.kernel));
}

TEST(Validate, ShrunkBoundsAreCaught) {
    const auto m = example_model();
    auto run = example_run(m);
    run.result->scale_bounds_for_testing(1e-30);
    const auto o = build_oracle(m.kernel, m.V, 200, 50);
    EXPECT_THROW(validate(run, o, m.kernel), SoundnessViolation);
    EXPECT_THROW(validate(*run.result, o, m.kernel), SoundnessViolation);
}

TEST(Determinism, CsvIsIdenticalAcrossRunsAndThreadCounts) {
    const auto m = example_model();
    std::ostringstream a, b;
    app::write_report_csv(example_run(m), a);
    ::setenv("ERGOCERT_THREADS", "1", 1);
    app::write_report_csv(example_run(m), b);
    ::unsetenv("ERGOCERT_THREADS");
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')), app::kReportColumns);
}

TEST(Workers, EnvironmentOverride) {
    ::setenv("ERGOCERT_THREADS", "3", 1);
    EXPECT_EQ(worker_count(), 3u);
    ::setenv("ERGOCERT_THREADS", "0", 1);
    EXPECT_GE(worker_count(), 1u);
    ::unsetenv("ERGOCERT_THREADS");
    EXPECT_GE(worker_count(), 1u);
}
