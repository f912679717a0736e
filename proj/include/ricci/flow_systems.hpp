#pragma once

// Right-hand sides of the Ricci flow ODE systems on three-summand spaces.
//
// rhs_full is the generic blockwise flow built from the Ricci eigenvalues and
// serves as the reference. The P_n systems (reduced x-coordinates, phase
// coordinates, submersion locus, reparametrized phase system) are separate
// closed-form transcriptions, not delegations, so that comparing them against
// rhs_full is a genuine cross-check.

#include <array>

#include "ricci/gw_space.hpp"

namespace ricci {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

enum class FlowNormalization {
    Normalized,    // x_i' = -2 r_i x_i + (2S/d) x_i, volume preserving
    Unnormalized,  // x_i' = -2 r_i x_i
};

/// Raised by rhs_reparam where phi' <= 0 and the time change is undefined.
class ReparamInvalid : public DomainError {
public:
    using DomainError::DomainError;
};

[[nodiscard]] Vec3 rhs_full(const GWSpace& space, const Metric& metric,
                            FlowNormalization norm = FlowNormalization::Normalized);

/// Normalized flow of P_n on the unit-volume slice, x3 eliminated.
[[nodiscard]] Vec2 rhs_reduced_x(int n, double x1, double x2);

/// Normalized flow of P_n in phase coordinates (phi, psi).
[[nodiscard]] Vec2 rhs_phase(int n, double phi, double psi);

/// phi' on the submersion locus psi = 0.
[[nodiscard]] double rhs_submersion(int n, double phi);

/// Phase system after the time change h' = 1/phi'; returns (1, psi'/phi').
[[nodiscard]] Vec2 rhs_reparam(int n, double phi, double psi);

}  // namespace ricci
