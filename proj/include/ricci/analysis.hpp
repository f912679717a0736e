#pragma once

// The perturbed-submersion experiment on P_n and its asymptotic diagnostics.
//
// Starting near the submersion locus at (phi, psi) = (N, -epsilon) the
// reparametrized phase system is integrated (phi = t + N) while the Ricci
// eigenvalues, psi * phi^(2n-2) and r1 * phi are monitored.

#include <optional>
#include <vector>

#include "ricci/gw_space.hpp"
#include "ricci/integrator.hpp"
#include "ricci/trajectory.hpp"

namespace ricci {

/// Initial data outside the regime the experiment models: some r_i(0) <= 0,
/// or phi'(0) <= 1 in original time.
class BadInitialData : public DomainError {
public:
    using DomainError::DomainError;
};

struct DivergenceThresholds {
    double psi_phi = -1e3;  // psi * phi^(2n-2)
    double r1_phi = -1e2;   // r1 * phi
};

struct ExperimentConfig {
    int n = 2;
    std::optional<double> N;  // initial phi; default_initial_phi() when absent
    double epsilon = 1e-3;    // psi(0) = -epsilon
    double t_max = 1e6;       // reparametrized time, i.e. phi(t_max) = N + t_max
    DivergenceThresholds thresholds;
    double rel_tol = 1e-10;
    // psi decays by many orders of magnitude; error control is effectively relative.
    double abs_tol = 1e-300;
    double event_tol = 1e-10;
    double late_phi = 1e3;  // the stop rule also waits for phi >= late_phi

    void validate() const;
};

struct MonotonicityChecks {
    bool phi_prime_gt_1 = false;
    bool psi_prime_gt_0 = false;
};

struct DivergenceFlags {
    bool psi_phi_pow = false;
    bool r1_phi = false;
};

struct DecayBound {
    bool holds = false;
    std::optional<double> t0;
};

struct PositivityEntry {
    double t;
    int negative_count;
    std::optional<int> smallest_k_positive;
};

struct ExperimentReport {
    int n = 2;
    double N = 0.0;
    double epsilon = 0.0;
    std::optional<double> t_r1_negative;
    std::optional<double> t_r2_negative;
    std::optional<double> t_r3_negative;
    int final_negative_count = 0;
    int expected_negative_count = 0;  // 8n - 8
    RicciSpectrum initial_spectrum;
    RicciSpectrum final_spectrum;
    std::optional<int> final_smallest_k_positive;
    bool r3_positive_final = false;
    MonotonicityChecks monotonicity;
    std::optional<double> slope_estimate;  // absent when psi vanishes
    double slope_target = 0.0;             // (5 - 4n)/3
    DecayBound decay;
    DivergenceFlags divergence;
    double final_t = 0.0;
    double final_phi = 0.0;
    Termination termination = Termination::ReachedTmax;
};

struct ExperimentRun {
    ExperimentReport report;
    Trajectory trajectory;
};

/// Smallest N in {4, 6, 8, 10, 15, 20, 30} with rhs_submersion(n, N) >= 1.1 and
/// all Ricci eigenvalues at (N, -epsilon) positive. Throws BadInitialData if none.
[[nodiscard]] double default_initial_phi(int n, double epsilon);

[[nodiscard]] ExperimentRun run_theorem_experiment(const ExperimentConfig& cfg);

/// (d psi/dt) * phi / psi at the last sample, with d psi/dt from the
/// reparametrized system. Throws DomainError if psi vanishes on the trajectory.
[[nodiscard]] double asymptotic_slope(const Trajectory& traj, int n);

/// Looks for the first sample time t0 after which psi * phi^eta, eta = 4n/3 - 1,
/// is nonincreasing (relative slack 1e-9 per step) to the end of the run; holds
/// if t0 falls before the final 10% of samples.
[[nodiscard]] DecayBound decay_bound_check(const Trajectory& traj, int n);

[[nodiscard]] DivergenceFlags divergence_check(const Trajectory& traj, int n, const DivergenceThresholds& thresholds);

[[nodiscard]] std::vector<PositivityEntry> positivity_timeline(const Trajectory& traj);

/// phi' > 1 and psi' > 0 at every sample, evaluated on the original-time phase system.
[[nodiscard]] MonotonicityChecks monotonicity_checks(const Trajectory& traj, int n);

}  // namespace ricci
