#include "ricci/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ricci/flow_systems.hpp"

namespace ricci {

namespace {

constexpr std::array<double, 7> kCandidateN{4, 6, 8, 10, 15, 20, 30};
constexpr double kSubmersionSpeedFloor = 1.1;
constexpr double kDecaySlack = 1e-9;

bool all_positive(const RicciSpectrum& s) {
    return s.r[0] > 0.0 && s.r[1] > 0.0 && s.r[2] > 0.0;
}

bool has_event(std::span<const TrajectoryEvent> events, std::string_view name) {
    return std::any_of(events.begin(), events.end(), [&](const auto& e) { return e.name == name; });
}

std::vector<SampleMonitor> experiment_monitors(const DivergenceThresholds& th) {
    return {
        {"r1", [](const Sample& s) { return s.diag.spectrum.r[0]; }},
        {"r2", [](const Sample& s) { return s.diag.spectrum.r[1]; }},
        {"r3", [](const Sample& s) { return s.diag.spectrum.r[2]; }},
        {"psi", [](const Sample& s) { return s.psi; }},
        {"psi_phi_pow", [](const Sample& s) { return s.diag.psi_phi_pow; }, EventKind::ThresholdCross, th.psi_phi},
        {"r1_phi", [](const Sample& s) { return s.diag.r1_phi; }, EventKind::ThresholdCross, th.r1_phi},
    };
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n < 2) throw DomainError("ExperimentConfig: n must be >= 2");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("ExperimentConfig: epsilon must be >= 0");
    }
    if (N && (!(*N > 0.0) || !(*N > epsilon))) {
        throw DomainError("ExperimentConfig: N must satisfy N > 0 and N > epsilon");
    }
    if (!(t_max > 0.0)) throw DomainError("ExperimentConfig: t_max must be positive");
}

double default_initial_phi(int n, double epsilon) {
    for (double N : kCandidateN) {
        if (!(N > epsilon)) continue;
        if (rhs_submersion(n, N) < kSubmersionSpeedFloor) continue;
        if (all_positive(ricci_phase(PhasePoint(N, -epsilon, n)))) return N;
    }
    throw BadInitialData("default_initial_phi: no candidate N works for n = " + std::to_string(n));
}

ExperimentRun run_theorem_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int n = cfg.n;
    const double N = cfg.N ? *cfg.N : default_initial_phi(n, cfg.epsilon);
    const PhasePoint start(N, -cfg.epsilon, n);

    const RicciSpectrum initial = ricci_phase(start);
    if (!all_positive(initial)) {
        throw BadInitialData("initial Ricci eigenvalues are not all positive at phi = " + std::to_string(N));
    }
    const double dphi0 = rhs_phase(n, start.phi, start.psi)[0];
    if (!(dphi0 > 1.0)) {
        throw BadInitialData("phi'(0) = " + std::to_string(dphi0) + " <= 1 at phi = " + std::to_string(N) +
                             "; N is not large enough");
    }

    IntegratorConfig icfg;
    icfg.rel_tol = cfg.rel_tol;
    icfg.abs_tol = cfg.abs_tol;
    icfg.event_tol = cfg.event_tol;
    icfg.t_max = cfg.t_max;

    const auto monitors = experiment_monitors(cfg.thresholds);
    const double late_phi = cfg.late_phi;
    const SampleStopRule stop = [late_phi](std::span<const TrajectoryEvent> events, const Sample& latest) {
        return latest.phi >= late_phi && has_event(events, "r1") && has_event(events, "r2") &&
               has_event(events, "psi_phi_pow") && has_event(events, "r1_phi");
    };

    const std::array<double, 2> y0{start.phi, start.psi};
    ExperimentRun run;
    run.trajectory = simulate(SystemKind::Reparam, n, y0, icfg, monitors, stop);
    const Trajectory& traj = run.trajectory;
    const Sample& last = traj.samples.back();

    ExperimentReport& rep = run.report;
    rep.n = n;
    rep.N = N;
    rep.epsilon = cfg.epsilon;
    rep.t_r1_negative = traj.first_event("r1");
    rep.t_r2_negative = traj.first_event("r2");
    rep.t_r3_negative = traj.first_event("r3");
    rep.initial_spectrum = initial;
    rep.final_spectrum = last.diag.spectrum;
    rep.final_negative_count = last.diag.negative_count;
    rep.expected_negative_count = 8 * n - 8;
    rep.final_smallest_k_positive = smallest_k_positive(last.diag.spectrum);
    rep.r3_positive_final = last.diag.spectrum.r[2] > 0.0;
    rep.monotonicity = monotonicity_checks(traj, n);
    rep.slope_target = (5.0 - 4.0 * n) / 3.0;
    if (cfg.epsilon > 0.0) rep.slope_estimate = asymptotic_slope(traj, n);
    rep.decay = decay_bound_check(traj, n);
    rep.divergence = divergence_check(traj, n, cfg.thresholds);
    rep.final_t = last.t;
    rep.final_phi = last.phi;
    rep.termination = traj.termination;
    return run;
}

double asymptotic_slope(const Trajectory& traj, int n) {
    if (traj.samples.empty()) throw DomainError("asymptotic_slope: empty trajectory");
    for (const auto& s : traj.samples) {
        if (s.psi == 0.0) throw DomainError("asymptotic_slope: psi vanishes on the trajectory");
    }
    const Sample& last = traj.samples.back();
    const double dpsi = rhs_reparam(n, last.phi, last.psi)[1];
    return dpsi * last.phi / last.psi;
}

DecayBound decay_bound_check(const Trajectory& traj, int n) {
    const auto& samples = traj.samples;
    if (samples.empty()) return {false, std::nullopt};
    if (std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.psi == 0.0; })) {
        return {true, samples.front().t};
    }

    const double eta = 4.0 * n / 3.0 - 1.0;
    std::vector<double> v(samples.size());
    std::transform(samples.begin(), samples.end(), v.begin(),
                   [eta](const Sample& s) { return s.psi * std::pow(s.phi, eta); });

    // Index of the first sample of the final nonincreasing run.
    std::size_t start = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1] + kDecaySlack * std::abs(v[i - 1])) start = i;
    }
    const auto cutoff = static_cast<double>(samples.size()) * 0.9;
    if (static_cast<double>(start) < cutoff) return {true, samples[start].t};
    return {false, std::nullopt};
}

DivergenceFlags divergence_check(const Trajectory& traj, int n, const DivergenceThresholds& thresholds) {
    DivergenceFlags flags;
    for (const auto& s : traj.samples) {
        const double psi_phi_pow = s.psi * std::pow(s.phi, 2 * n - 2);
        flags.psi_phi_pow = flags.psi_phi_pow || psi_phi_pow < thresholds.psi_phi;
        flags.r1_phi = flags.r1_phi || s.diag.spectrum.r[0] * s.phi < thresholds.r1_phi;
    }
    return flags;
}

std::vector<PositivityEntry> positivity_timeline(const Trajectory& traj) {
    std::vector<PositivityEntry> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        out.push_back({s.t, s.diag.negative_count, smallest_k_positive(s.diag.spectrum)});
    }
    return out;
}

MonotonicityChecks monotonicity_checks(const Trajectory& traj, int n) {
    MonotonicityChecks checks{true, true};
    for (const auto& s : traj.samples) {
        const auto [dphi, dpsi] = rhs_phase(n, s.phi, s.psi);
        checks.phi_prime_gt_1 = checks.phi_prime_gt_1 && dphi > 1.0;
        checks.psi_prime_gt_0 = checks.psi_prime_gt_0 && dpsi > 0.0;
    }
    return checks;
}

}  // namespace ricci
