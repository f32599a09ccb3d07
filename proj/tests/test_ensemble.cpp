#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "sqzlat/ensemble.hpp"
#include "sqzlat/experiments.hpp"
#include "sqzlat/rng.hpp"

using namespace sqzlat;

namespace {

// Standard-normal observable keyed to the seed; the synthetic target for the
// estimator sanity checks.
Eigen::VectorXd noise_experiment(std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd t(2);
    t(0) = normal(eng);
    t(1) = 3.0 + 0.1 * normal(eng);
    return t;
}

} // namespace

TEST_SUITE("ensemble") {

TEST_CASE("realization seeds never collide across the default plan") {
    const EnsemblePlan plan;
    std::set<std::uint64_t> seeds;
    for (int g = 0; g < plan.sextets; ++g)
        for (int i = 0; i < plan.group_size; ++i)
            seeds.insert(realization_seed(plan.master_seed, g, i));
    CHECK(seeds.size() == 300);
    CHECK(realization_seed(1, 0, 1) != realization_seed(2, 0, 1));
    CHECK(mix_seed(42, 1) != mix_seed(42, 2));
}

TEST_CASE("statistics are bit-identical for any worker count") {
    const EnsemblePlan plan{10, 6, 7};
    const EnsembleStats ref = run_ensemble(plan, noise_experiment, 1);
    for (const int workers : {2, 3, 8}) {
        const EnsembleStats got = run_ensemble(plan, noise_experiment, workers);
        CHECK((got.mean - ref.mean).cwiseAbs().maxCoeff() == 0.0);
        CHECK((got.stddev - ref.stddev).cwiseAbs().maxCoeff() == 0.0);
        CHECK((got.ci_low - ref.ci_low).cwiseAbs().maxCoeff() == 0.0);
        CHECK((got.ci_high - ref.ci_high).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(ref.n == 60);
}

TEST_CASE("reduction recovers the mean and the spread of the group means") {
    // Deterministic traces: realization r contributes (r, 1).
    Eigen::MatrixXd traces(4, 2);
    traces << 0, 1, 1, 1, 2, 1, 3, 1;
    const EnsembleStats s = reduce_traces(traces, 2, 2);
    CHECK(s.mean(0) == 1.5);
    CHECK(s.mean(1) == 1.0);
    // Group means 0.5 and 2.5: sample std = sqrt(2).
    CHECK(s.stddev(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.stddev(1) == 0.0);
    CHECK(s.ci_low(0) == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.ci_high(0) == doctest::Approx(1.5 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("estimator spread behaves like white noise") {
    const EnsembleStats s50 = run_ensemble(EnsemblePlan{50, 6, 13}, noise_experiment);
    const EnsembleStats s200 = run_ensemble(EnsemblePlan{200, 6, 13}, noise_experiment);
    // Group means of 6 unit-variance draws spread as 1/sqrt(6), independent of
    // how many groups are collected...
    const double want = 1.0 / std::sqrt(6.0);
    CHECK(s50.stddev(0) / want < 1.5);
    CHECK(s50.stddev(0) / want > 1.0 / 1.5);
    CHECK(s200.stddev(0) / want < 1.5);
    CHECK(s200.stddev(0) / want > 1.0 / 1.5);
    // ...while the grand-mean error shrinks with the group count.
    const double se50 = s50.stddev(0) / std::sqrt(50.0);
    const double se200 = s200.stddev(0) / std::sqrt(200.0);
    CHECK(se50 / se200 > 2.0 / 1.5);
    CHECK(se50 / se200 < 2.0 * 1.5);
}

TEST_CASE("failures carry the responsible seed, and ragged traces are rejected") {
    const EnsemblePlan plan{2, 2, 99};
    const std::uint64_t bad = realization_seed(99, 1, 0);
    try {
        collect_traces(plan, [&](std::uint64_t seed) {
            if (seed == bad) throw std::runtime_error("boom");
            return Eigen::VectorXd::Zero(3).eval();
        });
        FAIL("expected a rethrow");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find(std::to_string(bad)) != std::string::npos);
        CHECK(what.find("boom") != std::string::npos);
    }

    // Ragged traces are wrapped like any realization failure, seed included.
    CHECK_THROWS_WITH_AS(collect_traces(plan,
                                        [&](std::uint64_t seed) {
                                            const int len = seed == bad ? 4 : 3;
                                            return Eigen::VectorXd::Zero(len).eval();
                                        }),
                         doctest::Contains("trace length"), std::runtime_error);
}

TEST_CASE("variance traces convert to decibels after averaging") {
    Eigen::MatrixXd traces(4, 1);
    traces << 0.25, 0.25, 0.25, 0.25;
    const EnsembleStats s = reduce_variance_traces_db(traces, 2, 2);
    CHECK(s.mean(0) == 0.0);
    CHECK(s.stddev(0) == 0.0);

    // Two groups at half and double vacuum variance: the mean variance is the
    // arithmetic mean, not the dB mean.
    Eigen::MatrixXd mixed(2, 1);
    mixed << 0.125, 0.5;
    const EnsembleStats m = reduce_variance_traces_db(mixed, 2, 1);
    CHECK(m.mean(0) == doctest::Approx(10.0 * std::log10(1.25)).epsilon(1e-12));
}

TEST_CASE("phase-resolved statistics demand the three-segment layout") {
    CHECK_THROWS_AS(quadrature_phase_statistics(
                        EnsemblePlan{1, 1, 0},
                        [](std::uint64_t) { return Eigen::VectorXd::Zero(7).eval(); }, 3),
                    std::invalid_argument);
}

TEST_CASE("parameter overrides parse strictly") {
    Params p;
    p = apply_overrides(p, {{"alpha", "0.41"}, {"z_steps", "11"}, {"master_seed", "9"}});
    CHECK(p.alpha == 0.41);
    CHECK(p.z_steps == 11);
    CHECK(p.master_seed == 9);
    CHECK_THROWS_AS(apply_overrides(p, {{"gamma", "1"}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_overrides(p, {{"alpha", "0.3x"}}), std::invalid_argument);
}

TEST_CASE("sweep traces are reproducible and disorder widens the spread") {
    Params p;
    p.z_steps = 21;
    const Eigen::VectorXd a =
        quadrature_sweep_trace(p, LatticeKind::SSH, DisorderKind::Hopping, 0.6, 5);
    const Eigen::VectorXd b =
        quadrature_sweep_trace(p, LatticeKind::SSH, DisorderKind::Hopping, 0.6, 5);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

    const EnsemblePlan plan{8, 6, 3};
    const QuadraturePhaseStats clean = quadrature_sweep_statistics(
        p, LatticeKind::SSH, DisorderKind::Hopping, 0.0, plan);
    const QuadraturePhaseStats noisy = quadrature_sweep_statistics(
        p, LatticeKind::SSH, DisorderKind::Hopping, 0.6, plan);
    CHECK(clean.max_db.stddev.maxCoeff() == 0.0);
    CHECK(noisy.max_db.stddev.tail(10).minCoeff() > 0.0);
}

TEST_CASE("edge-mode squeezing survives bond disorder but not detuning") {
    // Squeezing of the first odd site under the two disorder families: the
    // sublattice-symmetric one keeps it exactly at vacuum, the detuning one
    // leaks squeezing onto it.
    const LatticeSpec spec{LatticeKind::SSH, 15, 0.3, 1.0, 0.0};
    const SqueezeParam xi{0.9, 0.0};
    const auto odd_site_db = [&](DisorderKind dkind) {
        const EnsemblePlan plan{10, 6, 31};
        const auto experiment = [&](std::uint64_t seed) {
            const Hamiltonian h =
                apply_disorder(build_hamiltonian(spec), DisorderConfig{dkind, 0.8, seed});
            Eigen::VectorXd t(1);
            t(0) = analytic_eigenmode_squeezing(edge_mode(h).coeffs, xi, 1);
            return t;
        };
        return run_ensemble(plan, experiment).mean(0);
    };
    CHECK(odd_site_db(DisorderKind::Hopping) == 0.0);
    CHECK(odd_site_db(DisorderKind::Onsite) < -1e-3);
}

} // TEST_SUITE
