#pragma once

// Flow runs on P_n with per-sample diagnostics.
//
// Each SystemKind fixes the state vector the integrator sees:
//   Full        (x1, x2, x3)
//   Reduced     (x1, x2)          x3 = (x1 x2)^-(n-1)
//   Phase       (phi, psi)        original time
//   Reparam     (phi, psi)        time changed so that phi' = 1
//   Submersion  (phi)             psi = 0

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ricci/flow_systems.hpp"
#include "ricci/gw_space.hpp"
#include "ricci/integrator.hpp"

namespace ricci {

enum class SystemKind { Full, Reduced, Phase, Reparam, Submersion };

[[nodiscard]] std::string to_string(SystemKind kind);
[[nodiscard]] std::optional<SystemKind> parse_system(std::string_view name);

/// Number of state components for a system.
[[nodiscard]] std::size_t state_size(SystemKind kind);

struct Diagnostics {
    RicciSpectrum spectrum;
    double volume = 0.0;
    int negative_count = 0;
    double psi_phi_pow = 0.0;  // psi * phi^(2n-2)
    double r1_phi = 0.0;       // r1 * phi
};

struct Sample {
    double t = 0.0;
    std::vector<double> state;
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
    double phi = 0.0, psi = 0.0;
    Diagnostics diag;
};

struct TrajectoryEvent {
    EventKind kind;
    std::string name;
    double level = 0.0;
    double t = 0.0;
    Sample sample;
};

struct Trajectory {
    SystemKind system = SystemKind::Full;
    int n = 2;
    std::vector<Sample> samples;
    std::vector<TrajectoryEvent> events;
    Termination termination = Termination::ReachedTmax;
    std::string message;

    /// Time of the first event with this name, if any.
    [[nodiscard]] std::optional<double> first_event(std::string_view name) const;
};

using SampleFunctional = std::function<double(const Sample&)>;

struct SampleMonitor {
    std::string name;
    SampleFunctional fn;
    EventKind kind = EventKind::SignChange;
    double level = 0.0;
    bool terminal = false;
};

/// Evaluated after each accepted step with the events so far and the latest sample.
using SampleStopRule = std::function<bool(std::span<const TrajectoryEvent>, const Sample&)>;

/// Builds a fully diagnosed sample from a raw state of the given system.
[[nodiscard]] Sample make_sample(SystemKind kind, int n, double t, std::span<const double> state);

/// Integrates the chosen P_n system from `initial` (size must equal state_size(kind)).
[[nodiscard]] Trajectory simulate(SystemKind kind, int n, std::span<const double> initial,
                                  const IntegratorConfig& config, std::span<const SampleMonitor> monitors = {},
                                  const SampleStopRule& stop_rule = {});

}  // namespace ricci
