#include "ricci/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ricci/flow_systems.hpp"
#include "ricci/trajectory.hpp"

namespace ricci {

namespace {

// |a - b| relative to max(|a|, |b|, floor).
double scaled_error(double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

class Tracker {
public:
    Tracker(std::string name, double tolerance) : result_{std::move(name), true, 0.0, tolerance, {}} {}

    void record(double err, int n, double p, double q) {
        if (err > result_.worst || std::isnan(err)) {
            result_.worst = err;
            std::ostringstream os;
            os << "worst at n=" << n << " (" << p << ", " << q << ")";
            result_.detail = os.str();
        }
        if (!(err <= result_.tolerance)) result_.passed = false;
    }

    CheckResult take() { return std::move(result_); }

private:
    CheckResult result_;
};

std::vector<std::pair<double, double>> x_grid(int points) {
    std::vector<std::pair<double, double>> out;
    for (const auto& [phi, psi] : phase_grid(points)) out.emplace_back(0.5 * (phi + psi), 0.5 * (phi - psi));
    return out;
}

CheckResult check_roundtrip(const CheckOptions& opt) {
    Tracker t("coordinate-roundtrip", 1e-14);
    for (int n = 2; n <= opt.n_max; ++n) {
        for (const auto& [x1, x2] : x_grid(opt.grid)) {
            const Metric m = from_phase(to_phase(n, x1, x2));
            t.record(std::max(scaled_error(m.x1, x1, 0.0), scaled_error(m.x2, x2, 0.0)), n, x1, x2);
        }
    }
    return t.take();
}

CheckResult check_volume_constraint(const CheckOptions& opt) {
    Tracker t("volume-constraint", 1e-10);
    for (int n = 2; n <= opt.n_max; ++n) {
        const GWSpace space = make_pn(n);
        for (const auto& [x1, x2] : x_grid(opt.grid)) {
            t.record(std::abs(volume(space, Metric(x1, x2, x3_from_volume_one(n, x1, x2))) - 1.0), n, x1, x2);
        }
    }
    return t.take();
}

CheckResult check_spectrum(const CheckOptions& opt) {
    Tracker t("spectrum-agreement", 1e-12);
    for (int n = 2; n <= opt.n_max; ++n) {
        const GWSpace space = make_pn(n);
        for (const auto& [phi, psi] : phase_grid(opt.grid)) {
            const PhasePoint p(phi, psi, n);
            const RicciSpectrum direct = opt.phase_spectrum(p);
            const RicciSpectrum via_x = ricci_coefficients(space, from_phase(p));
            double worst = 0.0;
            for (int i = 0; i < 3; ++i) worst = std::max(worst, scaled_error(direct.r[i], via_x.r[i], 1e-2));
            t.record(worst, n, phi, psi);
        }
    }
    return t.take();
}

CheckResult check_three_way(const CheckOptions& opt) {
    Tracker t("rhs-three-way", 1e-10);
    for (int n = 2; n <= opt.n_max; ++n) {
        const GWSpace space = make_pn(n);
        for (const auto& [phi, psi] : phase_grid(opt.grid)) {
            const Metric m = from_phase(PhasePoint(phi, psi, n));
            const Vec3 full = rhs_full(space, m);
            const Vec2 reduced = rhs_reduced_x(n, m.x1, m.x2);
            const Vec2 phase = rhs_phase(n, phi, psi);
            const double worst = std::max({
                scaled_error(reduced[0], full[0], 1.0),
                scaled_error(reduced[1], full[1], 1.0),
                scaled_error(phase[0], reduced[0] + reduced[1], 1.0),
                scaled_error(phase[1], reduced[0] - reduced[1], 1.0),
                scaled_error(phase[0], full[0] + full[1], 1.0),
                scaled_error(phase[1], full[0] - full[1], 1.0),
            });
            t.record(worst, n, phi, psi);
        }
    }
    return t.take();
}

CheckResult check_volume_derivative(const CheckOptions& opt) {
    Tracker t("volume-derivative", 1e-12);
    for (int n = 2; n <= opt.n_max; ++n) {
        const GWSpace space = make_pn(n);
        for (const auto& [x1, x2] : x_grid(opt.grid)) {
            // Off the unit-volume slice too: conservation does not depend on it.
            for (double x3 : {0.5, x3_from_volume_one(n, x1, x2), 2.0}) {
                const Metric m(x1, x2, x3);
                const Vec3 dx = rhs_full(space, m);
                double sum = 0.0;
                double scale = 0.0;
                for (int i = 0; i < 3; ++i) {
                    const double term = dx[i] / (space.a(i) * m[i]);
                    sum += term;
                    scale += std::abs(term);
                }
                t.record(std::abs(sum) / std::max(1.0, scale), n, x1, x2);
            }
        }
    }
    return t.take();
}

CheckResult check_volume_conservation(const CheckOptions& opt) {
    Tracker t("volume-conservation", 1e-8);
    IntegratorConfig cfg;
    cfg.t_max = 50.0;
    for (int n = 2; n <= std::min(opt.n_max, 4); ++n) {
        for (double x : {0.8, 1.0}) {
            const std::array<double, 3> y0{x, x, x3_from_volume_one(n, x, x)};
            const Trajectory traj = simulate(SystemKind::Full, n, y0, cfg);
            double worst = traj.termination == Termination::ReachedTmax ? 0.0 : 1.0;
            for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.diag.volume - 1.0));
            t.record(worst, n, x, x);
        }
    }
    return t.take();
}

CheckResult check_submersion(const CheckOptions& opt) {
    Tracker t("submersion-invariance", 1e-12);
    for (int n = 2; n <= opt.n_max; ++n) {
        for (int i = 0; i < opt.grid; ++i) {
            const double phi = 0.5 + 5.5 * i / std::max(1, opt.grid - 1);
            const Vec2 d = rhs_phase(n, phi, 0.0);
            // dpsi must vanish exactly on psi = 0
            const double err = d[1] == 0.0 ? scaled_error(d[0], rhs_submersion(n, phi), 1.0) : 1.0;
            t.record(err, n, phi, 0.0);
        }
    }
    return t.take();
}

CheckResult check_symmetry(const CheckOptions& opt) {
    Tracker t("swap-parity-symmetry", 0.0);
    for (int n = 2; n <= opt.n_max; ++n) {
        const GWSpace space = make_pn(n);
        for (const auto& [phi, psi] : phase_grid(opt.grid)) {
            const Vec2 a = rhs_phase(n, phi, psi);
            const Vec2 b = rhs_phase(n, phi, -psi);
            const Metric m = from_phase(PhasePoint(phi, psi, n));
            const RicciSpectrum r = ricci_coefficients(space, m);
            const RicciSpectrum s = ricci_coefficients(space, Metric(m.x2, m.x1, m.x3));
            const bool exact = a[0] == b[0] && a[1] == -b[1] && r.r[0] == s.r[1] && r.r[1] == s.r[0] &&
                               r.r[2] == s.r[2];
            t.record(exact ? 0.0 : 1.0, n, phi, psi);
        }
    }
    return t.take();
}

}  // namespace

std::vector<std::pair<double, double>> phase_grid(int points) {
    std::vector<std::pair<double, double>> out;
    const int m = std::max(points, 2);
    out.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const double phi = 0.5 + 5.5 * i / (m - 1);
        for (int j = 0; j < m; ++j) {
            const double u = -0.95 + 1.9 * j / (m - 1);
            out.emplace_back(phi, phi * u);
        }
    }
    return out;
}

std::vector<CheckResult> run_invariant_checks(const CheckOptions& options) {
    if (options.n_max < 2) throw DomainError("run_invariant_checks: n_max must be >= 2");
    return {
        check_roundtrip(options),
        check_volume_constraint(options),
        check_spectrum(options),
        check_three_way(options),
        check_volume_derivative(options),
        check_volume_conservation(options),
        check_submersion(options),
        check_symmetry(options),
    };
}

}  // namespace ricci
