#include "ricci/trajectory.hpp"

#include <cmath>
#include <limits>

namespace ricci {

namespace {

template <std::size_t Dim>
RhsFunction<Dim> rhs_for(SystemKind kind, int n);

template <>
RhsFunction<3> rhs_for<3>(SystemKind, int n) {
    return [space = make_pn(n)](double, const State<3>& y) {
        return rhs_full(space, Metric(y[0], y[1], y[2]));
    };
}

template <>
RhsFunction<2> rhs_for<2>(SystemKind kind, int n) {
    switch (kind) {
        case SystemKind::Reduced:
            return [n](double, const State<2>& y) { return rhs_reduced_x(n, y[0], y[1]); };
        case SystemKind::Phase:
            return [n](double, const State<2>& y) { return rhs_phase(n, y[0], y[1]); };
        case SystemKind::Reparam:
            return [n](double, const State<2>& y) { return rhs_reparam(n, y[0], y[1]); };
        default:
            throw DomainError("rhs_for: system " + to_string(kind) + " is not two-dimensional");
    }
}

template <>
RhsFunction<1> rhs_for<1>(SystemKind, int n) {
    return [n](double, const State<1>& y) { return State<1>{rhs_submersion(n, y[0])}; };
}

template <std::size_t Dim>
Trajectory run(SystemKind kind, int n, std::span<const double> initial, const IntegratorConfig& config,
               std::span<const SampleMonitor> monitors, const SampleStopRule& stop_rule) {
    State<Dim> y0{};
    std::copy(initial.begin(), initial.end(), y0.begin());

    std::vector<Monitor<Dim>> raw_monitors;
    raw_monitors.reserve(monitors.size());
    for (const auto& m : monitors) {
        raw_monitors.push_back({m.name,
                                [kind, n, fn = m.fn](double t, const State<Dim>& y) {
                                    return fn(make_sample(kind, n, t, y));
                                },
                                m.kind, m.level, m.terminal});
    }

    auto to_event = [&](const Event<Dim>& e) {
        return TrajectoryEvent{e.kind, e.name, e.level, e.t, make_sample(kind, n, e.t, e.state)};
    };

    StopRule<Dim> raw_stop;
    std::vector<TrajectoryEvent> seen;
    if (stop_rule) {
        raw_stop = [&](std::span<const Event<Dim>> events, double t, const State<Dim>& y) {
            while (seen.size() < events.size()) seen.push_back(to_event(events[seen.size()]));
            return stop_rule(std::span<const TrajectoryEvent>(seen), make_sample(kind, n, t, y));
        };
    }

    const Solution<Dim> sol = integrate<Dim>(rhs_for<Dim>(kind, n), y0, config,
                                             std::span<const Monitor<Dim>>(raw_monitors), raw_stop);

    Trajectory traj;
    traj.system = kind;
    traj.n = n;
    traj.termination = sol.termination;
    traj.message = sol.message;
    traj.samples.reserve(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        traj.samples.push_back(make_sample(kind, n, sol.t[i], sol.y[i]));
    }
    for (const auto& e : sol.events) traj.events.push_back(to_event(e));
    return traj;
}

}  // namespace

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::Full: return "full";
        case SystemKind::Reduced: return "reduced";
        case SystemKind::Phase: return "phase";
        case SystemKind::Reparam: return "reparam";
        case SystemKind::Submersion: return "submersion";
    }
    return "unknown";
}

std::optional<SystemKind> parse_system(std::string_view name) {
    for (auto kind : {SystemKind::Full, SystemKind::Reduced, SystemKind::Phase, SystemKind::Reparam,
                      SystemKind::Submersion}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::size_t state_size(SystemKind kind) {
    switch (kind) {
        case SystemKind::Full: return 3;
        case SystemKind::Submersion: return 1;
        default: return 2;
    }
}

std::optional<double> Trajectory::first_event(std::string_view name) const {
    for (const auto& e : events) {
        if (e.name == name) return e.t;
    }
    return std::nullopt;
}

Sample make_sample(SystemKind kind, int n, double t, std::span<const double> state) {
    if (state.size() != state_size(kind)) {
        throw DomainError("make_sample: state has wrong size for system " + to_string(kind));
    }
    Sample s;
    s.t = t;
    s.state.assign(state.begin(), state.end());

    const GWSpace space = make_pn(n);
    RicciSpectrum spectrum;
    switch (kind) {
        case SystemKind::Full:
        case SystemKind::Reduced: {
            const double x3 = kind == SystemKind::Full ? state[2] : x3_from_volume_one(n, state[0], state[1]);
            const Metric m(state[0], state[1], x3);
            s.x1 = m.x1;
            s.x2 = m.x2;
            s.x3 = m.x3;
            s.phi = m.x1 + m.x2;
            s.psi = m.x1 - m.x2;
            spectrum = ricci_coefficients(space, m);
            break;
        }
        case SystemKind::Phase:
        case SystemKind::Reparam:
        case SystemKind::Submersion: {
            const double psi = kind == SystemKind::Submersion ? 0.0 : state[1];
            const PhasePoint p(state[0], psi, n);
            const Metric m = from_phase(p);
            s.x1 = m.x1;
            s.x2 = m.x2;
            s.x3 = m.x3;
            s.phi = p.phi;
            s.psi = p.psi;
            spectrum = ricci_phase(p);
            break;
        }
    }

    s.diag.spectrum = spectrum;
    try {
        s.diag.volume = volume(space, Metric(s.x1, s.x2, s.x3));
    } catch (const RangeExceeded&) {
        s.diag.volume = std::numeric_limits<double>::quiet_NaN();
    }
    s.diag.negative_count = negative_count(spectrum);
    s.diag.psi_phi_pow = s.psi * std::pow(s.phi, 2 * n - 2);
    s.diag.r1_phi = spectrum.r[0] * s.phi;
    return s;
}

Trajectory simulate(SystemKind kind, int n, std::span<const double> initial, const IntegratorConfig& config,
                    std::span<const SampleMonitor> monitors, const SampleStopRule& stop_rule) {
    if (initial.size() != state_size(kind)) {
        throw DomainError("simulate: initial state for system " + to_string(kind) + " needs " +
                          std::to_string(state_size(kind)) + " components");
    }
    // Validates n and the initial state before integration starts.
    (void)make_sample(kind, n, 0.0, initial);
    switch (state_size(kind)) {
        case 3: return run<3>(kind, n, initial, config, monitors, stop_rule);
        case 2: return run<2>(kind, n, initial, config, monitors, stop_rule);
        default: return run<1>(kind, n, initial, config, monitors, stop_rule);
    }
}

}  // namespace ricci
