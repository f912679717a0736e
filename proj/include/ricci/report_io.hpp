#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ricci/analysis.hpp"
#include "ricci/trajectory.hpp"

namespace ricci {

inline constexpr std::string_view kTrajectoryCsvHeader = "t,x1,x2,x3,phi,psi,r1,r2,r3,S,V,neg_count";

/// %.17g, enough digits to reload a double bit-exactly.
[[nodiscard]] std::string format_number(double v);

/// One row per sample under kTrajectoryCsvHeader.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

[[nodiscard]] nlohmann::json spectrum_to_json(const RicciSpectrum& s);
[[nodiscard]] nlohmann::json report_to_json(const ExperimentReport& report);

}  // namespace ricci
