#include "ricci/report_io.hpp"

#include <cstdio>
#include <ostream>

namespace ricci {

namespace {

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << kTrajectoryCsvHeader << '\n';
    for (const auto& s : traj.samples) {
        const auto& r = s.diag.spectrum.r;
        for (double v : {s.t, s.x1, s.x2, s.x3, s.phi, s.psi, r[0], r[1], r[2], s.diag.spectrum.scalar, s.diag.volume}) {
            out << format_number(v) << ',';
        }
        out << s.diag.negative_count << '\n';
    }
}

nlohmann::json spectrum_to_json(const RicciSpectrum& s) {
    return {{"r", s.r}, {"multiplicities", s.mult}, {"scalar", s.scalar}};
}

nlohmann::json report_to_json(const ExperimentReport& rep) {
    nlohmann::json j;
    j["n"] = rep.n;
    j["N"] = rep.N;
    j["epsilon"] = rep.epsilon;
    j["t_r1_negative"] = optional_json(rep.t_r1_negative);
    j["t_r2_negative"] = optional_json(rep.t_r2_negative);
    j["t_r3_negative"] = optional_json(rep.t_r3_negative);
    j["final_negative_count"] = rep.final_negative_count;
    j["expected_negative_count"] = rep.expected_negative_count;
    j["final_smallest_k_positive"] = optional_json(rep.final_smallest_k_positive);
    j["r3_positive_final"] = rep.r3_positive_final;
    j["slope_estimate"] = optional_json(rep.slope_estimate);
    j["slope_target"] = rep.slope_target;
    j["decay_bound_holds"] = rep.decay.holds;
    j["decay_bound_t0"] = optional_json(rep.decay.t0);
    j["divergence"] = {{"psi_phi_pow", rep.divergence.psi_phi_pow}, {"r1_phi", rep.divergence.r1_phi}};
    j["monotonicity"] = {{"phi_prime_gt_1", rep.monotonicity.phi_prime_gt_1},
                         {"psi_prime_gt_0", rep.monotonicity.psi_prime_gt_0}};
    j["initial_spectrum"] = spectrum_to_json(rep.initial_spectrum);
    j["final_spectrum"] = spectrum_to_json(rep.final_spectrum);
    j["final_t"] = rep.final_t;
    j["final_phi"] = rep.final_phi;
    j["termination"] = to_string(rep.termination);
    return j;
}

}  // namespace ricci
