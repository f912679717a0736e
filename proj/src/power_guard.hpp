#pragma once

#include <cmath>
#include <string>

#include "ricci/gw_space.hpp"

namespace ricci::detail {

// Largest admissible value of phi^(2n) in the phase-coordinate formulas.
inline constexpr double kPhasePowerLimit = 1e280;

inline void guard_phase_powers(int n, double phi) {
    if (2.0 * n * std::log10(phi) > std::log10(kPhasePowerLimit)) {
        throw RangeExceeded("phi^(2n) exceeds 1e280 (n = " + std::to_string(n) +
                            ", phi = " + std::to_string(phi) + ")");
    }
}

}  // namespace ricci::detail
