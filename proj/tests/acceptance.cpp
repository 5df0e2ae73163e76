// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ergocert/app/config.hpp"
#include "ergocert/certify.hpp"
#include "ergocert/error.hpp"
#include "ergocert/random_walk.hpp"
#include "ergocert/spectral.hpp"
#include "ergocert/truncation.hpp"
#include "support/oracles.hpp"

using namespace ergocert;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, std::string what) {
        if (!cond) {
            ok = false;
            notes.push_back(std::move(what));
        }
    }
    void rel(double got, double want, double tol, const std::string& label) {
        const double d = std::abs(got - want) / std::abs(want);
        expect(d <= tol, fmt::format("{}: {:.6g} vs {:.6g} (rel {:.3g} > {:g})", label, got, want, d, tol));
    }
    void abs(double got, double want, double tol, const std::string& label) {
        const double d = std::abs(got - want);
        expect(d <= tol, fmt::format("{}: {:.6g} vs {:.6g} (abs {:.3g} > {:g})", label, got, want, d, tol));
    }
};

int failures = 0;

void report(int id, const std::string& title, const Check& c) {
    std::printf("%s criterion %d: %s\n", c.ok ? "PASS" : "FAIL", id, title.c_str());
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    if (!c.ok) ++failures;
}

template <class F>
void guarded(int id, const std::string& title, F&& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    report(id, title, c);
}

CertificationParams fixed(std::optional<double> rho, std::optional<double> theta, std::optional<double> r) {
    CertificationParams p;
    p.rho_k = rho;
    p.vartheta = theta;
    p.r_k = r;
    return p;
}

LevelRecord level(const app::ResolvedModel& m, std::size_t k, const CertificationParams& p) {
    auto rec = analyse_level(m.kernel, m.V, m.core, std::nullopt, p, k);
    if (!rec.analyzed) throw Error(fmt::format("k={} not analysed: {}", k, rec.reason));
    return rec;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const auto m = app::resolve(app::example_config());

    guarded(1, "Table 2 spectral data and direct TV bounds", [&](Check& c) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto model = app::resolve(app::example_config());
        const std::size_t ks[] = {15, 25, 35, 45};
        const double rho[] = {0.6018, 0.6142, 0.6177, 0.6192};
        const double C[] = {4.1539, 4.1540, 4.1540, 4.3736};
        const double tv[] = {8.44e-2, 5.712e-5, 3.277e-8, 1.733e-11};
        for (int i = 0; i < 4; ++i) {
            const auto rec = level(model, ks[i], fixed(0.75, 0.09, 0.9));
            const std::string k = fmt::format("k={}", ks[i]);
            c.expect(rec.analysis.s == 4, fmt::format("{} s = {}", k, rec.analysis.s));
            c.rel(rec.analysis.C_k, C[i], 0.02, k + " C_k");
            c.abs(rec.analysis.rho_tilde, rho[i], 1e-3, k + " rho_tilde");
            c.rel(rec.tv_direct, tv[i], 0.10, k + " tv_direct");
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(secs < 10.0, fmt::format("runtime {:.2f} s", secs));
    });

    guarded(2, "Table 2 rate pipeline", [&](Check& c) {
        for (std::size_t k : {15u, 25u, 35u, 45u}) {
            const auto rec = level(m, k, fixed(0.75, 0.09, 0.9));
            c.expect(rec.k1 == 20, fmt::format("k={} k1 = {}", k, rec.k1));
        }
        const auto r25 = level(m, 25, fixed(0.75, 0.09, 0.9));
        const auto r45 = level(m, 45, fixed(0.75, 0.09, 0.9));
        c.rel(r25.c_k, 4.715e5, 0.05, "c_25");
        c.rel(r45.c_k, 4.816e5, 0.05, "c_45");
        c.rel(r25.tv_from_rate.value_or(NAN), 1.112e-1, 0.10, "tv_from_rate(25)");
        c.rel(r45.tv_from_rate.value_or(NAN), 1.946e-8, 0.10, "tv_from_rate(45)");
    });

    guarded(3, "Table 1 rate/constant trade-off", [&](Check& c) {
        const double r[] = {0.87, 0.78, 0.76};
        const double theta[] = {0.023, 0.020, 0.0095};
        const double published[] = {1.924e7, 4.610e11, 1.348e14};
        double prev = 0.0;
        for (int i = 0; i < 3; ++i) {
            const auto rec = level(m, 45, fixed(0.75, theta[i], r[i]));
            c.rel(rec.c_k, published[i], 0.10, fmt::format("c_45 at r={}", r[i]));
            c.expect(rec.c_k > prev, fmt::format("c_45 not increasing at r={}", r[i]));
            prev = rec.c_k;
        }
    });

    guarded(4, "Table 3 rate bound at n = 300 and n(eps)", [&](Check& c) {
        const std::size_t ks[] = {30, 50};
        const double pn[] = {1.497e-7, 5.839e-7};
        for (int i = 0; i < 2; ++i) {
            const auto rec = level(m, ks[i], fixed(0.75, std::nullopt, 0.925));
            c.rel(pn_bound(300, rec.c_k, 0.925), pn[i], 0.05,
                  fmt::format("(a) k={} pn_bound(300) [c_k = {:.4g}, vartheta = {:.4g}]", ks[i], rec.c_k,
                              rec.analysis.vartheta));
        }
        const auto rec = level(m, 35, fixed(0.75, std::nullopt, 0.9));
        const double eps[] = {1e-2, 1e-4, 1e-6};
        const std::size_t want[] = {28, 34, 40};
        for (int i = 0; i < 3; ++i) {
            const auto n = n_for_epsilon(eps[i], rec.c_k, 0.9, m.core, m.V);
            c.expect(n == want[i], fmt::format("(b) n({:g}) = {} vs {}", eps[i], n, want[i]));
        }
    });

    guarded(5, "Soundness against the extended-precision oracle", [&](Check& c) {
        const auto oracle = build_oracle(m.kernel, m.V, 400, 300);
        std::size_t checks = 0;
        for (const auto& policy : {fixed(0.75, std::nullopt, std::nullopt), fixed(std::nullopt, std::nullopt, std::nullopt)}) {
            for (std::size_t k = 10; k <= 60; ++k) {
                const auto rec = analyse_level(m.kernel, m.V, m.core, std::nullopt, policy, k);
                c.expect(rec.tv_direct > 0.0, fmt::format("k={} no direct bound: {}", k, rec.reason));
                const double tv = measured_tv(m.kernel, oracle, k);
                c.expect(tv <= rec.tv_direct,
                         fmt::format("k={} rho_k={:.4g}: measured {:.6g} > bound {:.6g}", k, rec.analysis.rho_k,
                                     tv, rec.tv_direct));
                ++checks;
            }
        }
        const auto run = run_certification(m.kernel, m.V, m.core, std::nullopt, app::example_config().algorithm);
        const auto& rep = run.report();
        for (std::size_t n = 0; n <= 300; ++n) {
            c.expect(oracle.pn_measurements[n] <= rep.pn_bound(n),
                     fmt::format("n={}: measured {:.6g} > pn_bound {:.6g}", n, oracle.pn_measurements[n],
                                 rep.pn_bound(n)));
            ++checks;
        }
        c.expect(checks == 102 + 301, "check count");
    });

    guarded(6, "Closed-form oracles", [&](Check& c) {
        for (std::size_t k = 2; k <= 8; ++k) {
            const auto Pk = truncate(m.kernel, k);
            const double brute = oracle::brute_force_delta(m.kernel, Pk, m.V);
            c.expect(std::abs(delta_exact(m.kernel, k, m.V) - brute) <= 1e-12,
                     fmt::format("delta_exact k={} vs brute force {:.17g}", k, brute));
        }
        std::mt19937_64 rng(7);
        for (int rep = 0; rep < 5; ++rep) {
            const auto chain = oracle::BirthDeath::random(rng, 8 + 6 * rep);
            const auto pi = stationary(chain.matrix());
            const auto ref = chain.product_formula();
            for (std::size_t i = 0; i < pi.size(); ++i) {
                c.expect(std::abs(pi[i] - ref[i]) <= 1e-10, fmt::format("birth-death {} state {}", rep, i));
            }
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int rep = 0; rep < 100; ++rep) {
            const double p = u(rng), q = u(rng);
            Eigen::MatrixXd M(2, 2);
            M << 1 - p, p, q, 1 - q;
            const double got = second_eigenvalue_modulus(M);
            c.expect(std::abs(got - oracle::two_state_second_eigenvalue(p, q)) <= 1e-12,
                     fmt::format("2x2 p={} q={}", p, q));
        }
    });

    guarded(7, "General bound reduces to the direct bound", [&](Check& c) {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<std::size_t> kd(1, 200);
        std::uniform_real_distribution<double> rd(0.05, 0.999), cd(1.0, 1e3);
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t k = kd(rng);
            const double rho = rd(rng), C = cd(rng);
            const double first = m.core.L / ((1 - m.core.delta) * m.V.value(k));
            const auto Delta = DeltaEstimate::discrete(k, m.core, m.V);
            if (!(Delta.value <= 1.0)) continue;
            const double g = tv_bound_general(Direction::backward, Delta, rho, C, m.core, first);
            const double d = tv_bound_direct(k, C, rho, m.core, m.V);
            c.expect(std::abs(g - d) <= 1e-12 * d, fmt::format("k={} rho={} C={}: {:.17g} vs {:.17g}", k, rho, C, g, d));
        }
    });

    guarded(8, "Determinism of the certify CSV", [&](Check& c) {
        const auto base = fs::temp_directory_path() / "ergocert_acceptance";
        fs::remove_all(base);
        std::string csv[2];
        for (int i = 0; i < 2; ++i) {
            const auto dir = base / fmt::format("run{}", i);
            fs::create_directories(dir);
            const std::string cmd = fmt::format("\"{}\" certify --out \"{}\" > \"{}\" 2>&1", ERGOCERT_CLI,
                                                dir.string(), (dir / "stdout.txt").string());
            const int rc = std::system(cmd.c_str());
            c.expect(rc == 0, fmt::format("run {} exit status {}", i, rc));
            csv[i] = slurp(dir / "report.csv");
        }
        c.expect(!csv[0].empty(), "empty report.csv");
        c.expect(csv[0] == csv[1], "report.csv differs between runs");
    });

    return failures == 0 ? 0 : 1;
}
