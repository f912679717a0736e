#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ricci {

struct PortraitConfig {
    int n = 2;
    double phi_min = 1.0;
    double phi_max = 8.0;
    double psi_min = -2.0;
    double psi_max = 2.0;
    int cols = 15;
    int rows = 9;
    double width = 800.0;
    double height = 500.0;
    std::vector<std::pair<double, double>> starts;  // (phi, psi) of overlaid trajectories
    double t_max = 2.0;                             // original-time horizon per trajectory

    /// Throws DomainError for an empty box, phi_min <= 0, a box without any
    /// admissible point (phi > |psi|), or fewer than 2 grid points per axis.
    void validate() const;
};

/// Standalone SVG 1.1 phase portrait of the (phi, psi) system: unit-length
/// direction arrows on the grid (markers where the field vanishes), the
/// submersion axis psi = 0, and trajectory polylines. Output is deterministic.
[[nodiscard]] std::string render_portrait(const PortraitConfig& cfg);

}  // namespace ricci
