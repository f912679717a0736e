#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>

#include "ricci/analysis.hpp"
#include "ricci/flow_systems.hpp"

using namespace ricci;

namespace {

const ExperimentRun& cached_run(int n) {
    static std::map<int, ExperimentRun> runs;
    auto it = runs.find(n);
    if (it == runs.end()) {
        ExperimentConfig cfg;
        cfg.n = n;
        it = runs.emplace(n, run_theorem_experiment(cfg)).first;
    }
    return it->second;
}

Trajectory synthetic(int n, const std::vector<std::pair<double, double>>& phi_psi) {
    Trajectory traj;
    traj.system = SystemKind::Reparam;
    traj.n = n;
    double t = 0.0;
    for (const auto& [phi, psi] : phi_psi) {
        const std::vector<double> y{phi, psi};
        traj.samples.push_back(make_sample(SystemKind::Reparam, n, t, y));
        t += 1.0;
    }
    return traj;
}

}  // namespace

TEST_CASE("ExperimentConfig validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.n = 1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.epsilon = -1e-3;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.N = 1e-4;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.t_max = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.epsilon = 0.0;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("default initial phi") {
    for (int n = 2; n <= 6; ++n) {
        const double N = default_initial_phi(n, 1e-3);
        CHECK(N == 4.0);
        CHECK(rhs_submersion(n, N) >= 1.1);
    }
}

TEST_CASE("perturbed submersion run: what the flow actually does") {
    for (int n = 2; n <= 5; ++n) {
        CAPTURE(n);
        const ExperimentReport& rep = cached_run(n).report;
        CHECK(rep.N == 4.0);
        CHECK(rep.termination == Termination::ReachedTmax);
        for (double r : rep.initial_spectrum.r) CHECK(r > 0.0);
        REQUIRE(rep.t_r1_negative.has_value());
        // x1 < x2 here, and only r1 crosses zero; r2 and r3 grow without bound
        CHECK_FALSE(rep.t_r2_negative.has_value());
        CHECK_FALSE(rep.t_r3_negative.has_value());
        CHECK(rep.final_spectrum.r[0] < 0.0);
        CHECK(rep.final_spectrum.r[1] > 0.0);
        CHECK(rep.r3_positive_final);
        CHECK(rep.final_negative_count == 4 * (n - 1));
        CHECK(rep.expected_negative_count == 8 * n - 8);
        // the negative block has multiplicity 4(n-1); it is (8n-8)-positive but not less
        CHECK(rep.final_smallest_k_positive == 8 * n - 8);
        CHECK(rep.monotonicity.phi_prime_gt_1);
        CHECK(rep.monotonicity.psi_prime_gt_0);
        CHECK(rep.final_phi == doctest::Approx(rep.N + rep.final_t).epsilon(1e-12));
    }
}

TEST_CASE("r1 at its event time") {
    const ExperimentRun& run = cached_run(2);
    const double ts = *run.report.t_r1_negative;
    const auto it = std::find_if(run.trajectory.events.begin(), run.trajectory.events.end(),
                                 [](const TrajectoryEvent& e) { return e.name == "r1"; });
    REQUIRE(it != run.trajectory.events.end());
    CHECK(std::abs(it->sample.diag.spectrum.r[0]) < 1e-9);

    // neighbouring accepted samples bracket the crossing
    const auto& samples = run.trajectory.samples;
    const auto after = std::find_if(samples.begin(), samples.end(), [&](const Sample& s) { return s.t > ts; });
    REQUIRE(after != samples.end());
    REQUIRE(after != samples.begin());
    CHECK(after->diag.spectrum.r[0] < 0.0);
    CHECK(std::prev(after)->diag.spectrum.r[0] > 0.0);

    // an independent run to just past the located time sees r1 < 0
    ExperimentConfig base;
    IntegratorConfig cfg;
    cfg.rel_tol = base.rel_tol;
    cfg.abs_tol = base.abs_tol;
    cfg.t_max = ts + 1.0;
    const std::vector<double> y0{4.0, -1e-3};
    const Trajectory past = simulate(SystemKind::Reparam, 2, y0, cfg);
    CHECK(past.samples.back().diag.spectrum.r[0] < 0.0);
    cfg.t_max = ts - 1.0;
    const Trajectory before = simulate(SystemKind::Reparam, 2, y0, cfg);
    CHECK(before.samples.back().diag.spectrum.r[0] > 0.0);
}

TEST_CASE("asymptotic slope, decay bound and divergence") {
    for (int n = 2; n <= 5; ++n) {
        CAPTURE(n);
        const ExperimentRun& run = cached_run(n);
        const ExperimentReport& rep = run.report;
        REQUIRE(rep.slope_estimate.has_value());
        CHECK(rep.slope_target == doctest::Approx((5.0 - 4.0 * n) / 3.0));
        CHECK(std::abs(*rep.slope_estimate - rep.slope_target) < 0.05 * std::abs(rep.slope_target));
        CHECK(run.trajectory.samples.back().phi >= 1e3);
        CHECK(rep.decay.holds);
        CHECK(rep.decay.t0.has_value());
        CHECK(rep.divergence.psi_phi_pow);
        CHECK(rep.divergence.r1_phi);
        const DivergenceFlags again = divergence_check(run.trajectory, n, {});
        CHECK(again.psi_phi_pow);
        CHECK(again.r1_phi);
        const DivergenceFlags strict = divergence_check(run.trajectory, n, {-1e300, -1e300});
        CHECK_FALSE(strict.psi_phi_pow);
        CHECK_FALSE(strict.r1_phi);
    }
}

TEST_CASE("unperturbed run stays on the submersion locus") {
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.N = 10.0;
    cfg.epsilon = 0.0;
    cfg.t_max = 1e4;
    const ExperimentRun run = run_theorem_experiment(cfg);
    CHECK_FALSE(run.report.t_r1_negative.has_value());
    CHECK_FALSE(run.report.t_r2_negative.has_value());
    for (const auto& s : run.trajectory.samples) {
        CHECK(s.psi == 0.0);
        for (double r : s.diag.spectrum.r) CHECK(r > 0.0);
    }
    CHECK_FALSE(run.report.slope_estimate.has_value());
    CHECK(run.report.decay.holds);
    CHECK(run.report.decay.t0 == 0.0);
    CHECK_FALSE(run.report.divergence.psi_phi_pow);
    CHECK_FALSE(run.report.divergence.r1_phi);
    CHECK(run.report.final_negative_count == 0);
    CHECK_THROWS_AS((void)asymptotic_slope(run.trajectory, 2), DomainError);
}

TEST_CASE("initial data at the Einstein radius is rejected") {
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.N = 2.0;
    CHECK_THROWS_AS((void)run_theorem_experiment(cfg), BadInitialData);
    cfg.N = 2.5;  // phi' > 0 but below 1
    CHECK(rhs_submersion(2, 2.5) < 1.0);
    CHECK_THROWS_AS((void)run_theorem_experiment(cfg), BadInitialData);
    cfg.N = 1.0;  // r3 < 0 there
    CHECK_THROWS_AS((void)run_theorem_experiment(cfg), BadInitialData);
}

TEST_CASE("explicit N = 10 matches the default pipeline qualitatively") {
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.N = 10.0;
    const ExperimentRun run = run_theorem_experiment(cfg);
    CHECK(run.report.t_r1_negative.has_value());
    CHECK(run.report.final_negative_count == 4);
    CHECK(run.report.divergence.psi_phi_pow);
    CHECK(run.report.divergence.r1_phi);
}

TEST_CASE("decay bound on synthetic sequences") {
    const int n = 2;  // eta = 5/3
    const double eta = 4.0 * n / 3.0 - 1.0;
    std::vector<std::pair<double, double>> decreasing, rising_end, bump;
    for (int i = 0; i < 100; ++i) {
        const double phi = 10.0 + i;
        decreasing.emplace_back(phi, -1e-3 * std::pow(phi, -eta) * (1.0 - 0.001 * i));
        rising_end.emplace_back(phi, -1e-3 * std::pow(phi, -eta) * (i < 95 ? 1.0 + 0.001 * i : 1.0 - 0.01 * i));
        bump.emplace_back(phi, -1e-3 * std::pow(phi, -eta) * (i < 20 ? 1.0 - 0.01 * i : 1.0));
    }
    // psi * phi^eta: magnitude shrinking while negative means increasing values
    const DecayBound a = decay_bound_check(synthetic(n, decreasing), n);
    CHECK_FALSE(a.holds);
    // magnitude growing means nonincreasing from the start
    std::vector<std::pair<double, double>> growing;
    for (int i = 0; i < 100; ++i) growing.emplace_back(10.0 + i, -1e-3 * std::pow(10.0 + i, -eta) * (1.0 + 0.01 * i));
    const DecayBound b = decay_bound_check(synthetic(n, growing), n);
    CHECK(b.holds);
    CHECK(b.t0 == 0.0);
    const DecayBound c = decay_bound_check(synthetic(n, rising_end), n);
    CHECK_FALSE(c.holds);
    const DecayBound d = decay_bound_check(synthetic(n, bump), n);
    CHECK(d.holds);
    CHECK(d.t0 == 19.0);

    std::vector<std::pair<double, double>> zero(10, {5.0, 0.0});
    const DecayBound z = decay_bound_check(synthetic(n, zero), n);
    CHECK(z.holds);
    CHECK(z.t0 == 0.0);
    CHECK_FALSE(decay_bound_check(Trajectory{}, n).holds);
}

TEST_CASE("decay bound on a short run") {
    // psi * phi^eta is already nonincreasing at phi = 4, so even a short run passes
    ExperimentConfig cfg;
    cfg.n = 2;
    cfg.t_max = 1.0;
    const ExperimentRun run = run_theorem_experiment(cfg);
    CHECK(run.report.decay.holds);
    CHECK_FALSE(run.report.divergence.psi_phi_pow);
    CHECK_FALSE(run.report.t_r1_negative.has_value());
}

TEST_CASE("positivity timeline") {
    const ExperimentRun& run = cached_run(2);
    const auto timeline = positivity_timeline(run.trajectory);
    REQUIRE(timeline.size() == run.trajectory.samples.size());
    CHECK(timeline.front().t == 0.0);
    CHECK(timeline.front().negative_count == 0);
    CHECK(timeline.front().smallest_k_positive == 1);
    CHECK(timeline.back().negative_count == 4);
    CHECK(timeline.back().smallest_k_positive == 8);
    // once r1 is negative it stays negative
    bool seen = false;
    for (const auto& e : timeline) {
        if (seen) CHECK(e.negative_count == 4);
        seen = seen || e.negative_count > 0;
    }
}
