#pragma once

// Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4) pair with
// proportional-integral step control) with sign-change event detection on a
// cubic Hermite dense output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ricci/gw_space.hpp"

namespace ricci {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-3;
    double max_step = std::numeric_limits<double>::infinity();
    double t_max = 1.0;
    long max_steps = 10'000'000;
    double event_tol = 1e-10;  // width of the final bisection bracket

    /// Throws DomainError unless all tolerances are positive, t_max > 0 and max_steps >= 1.
    void validate() const;
};

enum class Termination {
    ReachedTmax,
    EventStop,
    StepUnderflow,
    RangeExceeded,
    NonFinite,
    MaxSteps,
};

[[nodiscard]] std::string to_string(Termination term);

enum class EventKind { SignChange, ThresholdCross, StopCondition };

[[nodiscard]] std::string to_string(EventKind kind);

/// Raised by locate_sign_change when the endpoints do not bracket a sign change.
class NoBracket : public DomainError {
public:
    using DomainError::DomainError;
};

/// Steps below this size without meeting the tolerance end the run.
inline constexpr double kMinStep = 1e-14;

/// Bisection for a sign change of g on [t_lo, t_hi]. Requires g(t_lo) g(t_hi) < 0.
/// Returns the midpoint of the final bracket, whose width is below tol.
double locate_sign_change(const std::function<double(double)>& g, double t_lo, double t_hi, double tol);

template <std::size_t Dim>
using State = std::array<double, Dim>;

template <std::size_t Dim>
using RhsFunction = std::function<State<Dim>(double, const State<Dim>&)>;

/// Cubic Hermite interpolant of one accepted step.
template <std::size_t Dim>
struct HermiteInterpolant {
    double t0;
    double t1;
    State<Dim> y0;
    State<Dim> y1;
    State<Dim> f0;
    State<Dim> f1;

    State<Dim> operator()(double t) const {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        State<Dim> y{};
        for (std::size_t i = 0; i < Dim; ++i) {
            y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        }
        return y;
    }
};

/// A named scalar functional of (t, y) watched during integration.
/// SignChange fires on sign changes of fn; ThresholdCross on sign changes of fn - level.
template <std::size_t Dim>
struct Monitor {
    std::string name;
    std::function<double(double, const State<Dim>&)> fn;
    EventKind kind = EventKind::SignChange;
    double level = 0.0;
    bool terminal = false;
};

template <std::size_t Dim>
struct Event {
    EventKind kind;
    std::string name;
    double level = 0.0;
    double t = 0.0;
    State<Dim> state{};
};

/// Raw output of integrate: every accepted step plus detected events.
template <std::size_t Dim>
struct Solution {
    std::vector<double> t;
    std::vector<State<Dim>> y;
    std::vector<Event<Dim>> events;
    Termination termination = Termination::ReachedTmax;
    std::string message;
    long accepted_steps = 0;
    long rejected_steps = 0;
};

/// Optional rule evaluated after every accepted step; returning true ends the
/// run with a StopCondition event.
template <std::size_t Dim>
using StopRule = std::function<bool(std::span<const Event<Dim>>, double, const State<Dim>&)>;

namespace detail {

struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    // difference between the 5th- and 4th-order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

// PI controller constants (Hairer, Norsett & Wanner, DOPRI5 defaults).
inline constexpr double kSafety = 0.9;
inline constexpr double kFacMin = 0.2;
inline constexpr double kFacMax = 10.0;
inline constexpr double kBeta = 0.04;
inline constexpr double kAlpha = 0.2 - 0.75 * kBeta;

template <std::size_t Dim>
bool all_finite(const State<Dim>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace detail

/// Integrates y' = rhs(t, y) from (t0, initial) up to config.t_max.
///
/// A RangeExceeded, DomainError or non-finite value in a trial stage rejects
/// the step. If that persists until the step underflows, the run ends with
/// RangeExceeded or NonFinite, or the DomainError is rethrown. RangeExceeded
/// at the initial state ends the run immediately.
template <std::size_t Dim>
Solution<Dim> integrate(const RhsFunction<Dim>& rhs, const State<Dim>& initial, const IntegratorConfig& config,
                        std::span<const Monitor<Dim>> monitors = {}, const StopRule<Dim>& stop_rule = {},
                        double t0 = 0.0) {
    using DP = detail::DormandPrince;
    config.validate();
    if (!(config.t_max > t0)) throw DomainError("integrate: t_max must exceed the initial time");

    Solution<Dim> sol;
    double t = t0;
    State<Dim> y = initial;

    auto finish = [&](Termination term, std::string msg) {
        sol.termination = term;
        sol.message = std::move(msg);
        return sol;
    };

    State<Dim> f{};
    try {
        f = rhs(t, y);
    } catch (const RangeExceeded& e) {
        sol.t.push_back(t);
        sol.y.push_back(y);
        return finish(Termination::RangeExceeded, e.what());
    }
    sol.t.push_back(t);
    sol.y.push_back(y);
    if (!detail::all_finite(y) || !detail::all_finite(f)) {
        return finish(Termination::NonFinite, "non-finite initial state or derivative");
    }

    auto monitor_value = [&](const Monitor<Dim>& m, double tt, const State<Dim>& yy) {
        const double v = m.fn(tt, yy);
        return m.kind == EventKind::ThresholdCross ? v - m.level : v;
    };
    std::vector<double> g_prev(monitors.size());
    for (std::size_t i = 0; i < monitors.size(); ++i) g_prev[i] = monitor_value(monitors[i], t, y);

    double h = std::min({config.initial_step, config.max_step, config.t_max - t});
    double fac_old = 1e-4;
    bool last_rejected = false;
    bool last_trial_bad = false;
    std::exception_ptr last_domain_error;
    std::string last_range_error;

    while (t < config.t_max) {
        if (sol.accepted_steps + sol.rejected_steps >= config.max_steps) {
            return finish(Termination::MaxSteps, "max_steps reached");
        }
        if (h < kMinStep || t + h == t) {
            if (last_trial_bad) {
                if (last_domain_error) std::rethrow_exception(last_domain_error);
                if (!last_range_error.empty()) return finish(Termination::RangeExceeded, last_range_error);
                return finish(Termination::NonFinite, "non-finite values persisted down to the minimum step");
            }
            return finish(Termination::StepUnderflow, "step size fell below 1e-14 at t = " + std::to_string(t));
        }
        bool hits_end = false;
        if (t + h >= config.t_max) {
            h = config.t_max - t;
            hits_end = true;
        }

        State<Dim> k2, k3, k4, k5, k6, k7, y1, tmp;
        double err = 0.0;
        bool trial_bad = false;
        try {
            auto stage = [&](auto&& combine) {
                for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + h * combine(i);
            };
            const State<Dim>& k1 = f;
            stage([&](std::size_t i) { return DP::a21 * k1[i]; });
            k2 = rhs(t + DP::c2 * h, tmp);
            stage([&](std::size_t i) { return DP::a31 * k1[i] + DP::a32 * k2[i]; });
            k3 = rhs(t + DP::c3 * h, tmp);
            stage([&](std::size_t i) { return DP::a41 * k1[i] + DP::a42 * k2[i] + DP::a43 * k3[i]; });
            k4 = rhs(t + DP::c4 * h, tmp);
            stage([&](std::size_t i) {
                return DP::a51 * k1[i] + DP::a52 * k2[i] + DP::a53 * k3[i] + DP::a54 * k4[i];
            });
            k5 = rhs(t + DP::c5 * h, tmp);
            stage([&](std::size_t i) {
                return DP::a61 * k1[i] + DP::a62 * k2[i] + DP::a63 * k3[i] + DP::a64 * k4[i] + DP::a65 * k5[i];
            });
            k6 = rhs(t + h, tmp);
            stage([&](std::size_t i) {
                return DP::a71 * k1[i] + DP::a73 * k3[i] + DP::a74 * k4[i] + DP::a75 * k5[i] + DP::a76 * k6[i];
            });
            y1 = tmp;
            k7 = rhs(t + h, y1);

            double sq = 0.0;
            for (std::size_t i = 0; i < Dim; ++i) {
                const double e = h * (DP::e1 * k1[i] + DP::e3 * k3[i] + DP::e4 * k4[i] + DP::e5 * k5[i] +
                                      DP::e6 * k6[i] + DP::e7 * k7[i]);
                const double sc = config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
                sq += (e / sc) * (e / sc);
            }
            err = std::sqrt(sq / static_cast<double>(Dim));
            trial_bad = !std::isfinite(err) || !detail::all_finite(y1) || !detail::all_finite(k7);
            last_domain_error = nullptr;
            last_range_error.clear();
        } catch (const RangeExceeded& e) {
            // usually an overshooting trial step; retried with a smaller h
            trial_bad = true;
            last_range_error = e.what();
            last_domain_error = nullptr;
        } catch (const DomainError&) {
            trial_bad = true;
            last_domain_error = std::current_exception();
            last_range_error.clear();
        }

        if (trial_bad) {
            ++sol.rejected_steps;
            last_trial_bad = true;
            last_rejected = true;
            h *= 0.25;
            continue;
        }
        last_trial_bad = false;

        const double fac11 = std::pow(std::max(err, 1e-300), detail::kAlpha);
        if (err <= 1.0) {
            ++sol.accepted_steps;
            const double t1 = hits_end ? config.t_max : t + h;
            const HermiteInterpolant<Dim> interp{t, t1, y, y1, f, k7};

            // Events inside this step, in time order.
            std::vector<double> g_new(monitors.size());
            std::vector<std::pair<double, std::size_t>> hits;
            for (std::size_t i = 0; i < monitors.size(); ++i) {
                g_new[i] = monitor_value(monitors[i], t1, y1);
                if (detail::sign_of(g_prev[i]) * detail::sign_of(g_new[i]) < 0) {
                    const auto& m = monitors[i];
                    const double ts = locate_sign_change(
                        [&](double tt) { return monitor_value(m, tt, interp(tt)); }, t, t1, config.event_tol);
                    hits.emplace_back(ts, i);
                }
            }
            std::sort(hits.begin(), hits.end());
            for (const auto& [ts, i] : hits) {
                const auto& m = monitors[i];
                sol.events.push_back({m.kind, m.name, m.level, ts, interp(ts)});
                if (m.terminal) {
                    sol.t.push_back(ts);
                    sol.y.push_back(interp(ts));
                    return finish(Termination::EventStop, "terminal event '" + m.name + "'");
                }
            }
            g_prev = std::move(g_new);

            t = t1;
            y = y1;
            f = k7;
            sol.t.push_back(t);
            sol.y.push_back(y);

            if (stop_rule && stop_rule(std::span<const Event<Dim>>(sol.events), t, y)) {
                sol.events.push_back({EventKind::StopCondition, "stop_rule", 0.0, t, y});
                return finish(Termination::EventStop, "stop rule satisfied");
            }

            double fac = fac11 / std::pow(fac_old, detail::kBeta);
            fac = std::clamp(fac / detail::kSafety, 1.0 / detail::kFacMax, 1.0 / detail::kFacMin);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            fac_old = std::max(err, 1e-4);
            last_rejected = false;
            h = std::min(h_new, config.max_step);
        } else {
            ++sol.rejected_steps;
            last_rejected = true;
            h /= std::min(1.0 / detail::kFacMin, fac11 / detail::kSafety);
        }
    }
    return finish(Termination::ReachedTmax, "reached t_max");
}

}  // namespace ricci
