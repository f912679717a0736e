#pragma once

// Grid-based invariant checks shared by the `check` subcommand and the tests.

#include <functional>
#include <string>
#include <vector>

#include "ricci/gw_space.hpp"

namespace ricci {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // largest observed error in the check's own metric
    double tolerance = 0.0;
    std::string detail;
};

using PhaseSpectrumFn = std::function<RicciSpectrum(const PhasePoint&)>;

struct CheckOptions {
    int n_max = 6;
    int grid = 20;  // points per axis on the (phi, psi) and (x1, x2) grids
    // Injection point for mutation testing of the phase-coordinate spectrum.
    PhaseSpectrumFn phase_spectrum = ricci_phase;
};

/// Admissible (phi, psi) grid: phi in [0.5, 6], psi = phi * u with u in [-0.95, 0.95].
[[nodiscard]] std::vector<std::pair<double, double>> phase_grid(int points);

/// Runs every invariant for n = 2..n_max. Throws DomainError if n_max < 2.
[[nodiscard]] std::vector<CheckResult> run_invariant_checks(const CheckOptions& options);

}  // namespace ricci
