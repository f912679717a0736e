#include "ricci/portrait.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ricci/flow_systems.hpp"
#include "ricci/trajectory.hpp"

namespace ricci {

namespace {

constexpr double kMargin = 50.0;
constexpr double kZeroField = 1e-12;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v + 0.0);  // + 0.0 folds -0 into 0
    return buf;
}

struct Frame {
    double phi_min, phi_max, psi_min, psi_max;
    double width, height;

    double px(double phi) const { return kMargin + (phi - phi_min) / (phi_max - phi_min) * plot_w(); }
    double py(double psi) const { return kMargin + (psi_max - psi) / (psi_max - psi_min) * plot_h(); }
    double plot_w() const { return width - 2.0 * kMargin; }
    double plot_h() const { return height - 2.0 * kMargin; }
};

}  // namespace

void PortraitConfig::validate() const {
    if (n < 2) throw DomainError("portrait: n must be >= 2");
    if (!(phi_max > phi_min) || !(psi_max > psi_min)) throw DomainError("portrait: empty bounding box");
    if (!(phi_min > 0.0)) throw DomainError("portrait: phi range must be positive");
    const double min_abs_psi = (psi_min <= 0.0 && psi_max >= 0.0) ? 0.0 : std::min(std::abs(psi_min), std::abs(psi_max));
    if (!(phi_max > min_abs_psi)) throw DomainError("portrait: bounding box contains no point with phi > |psi|");
    if (cols < 2 || rows < 2) throw DomainError("portrait: grid needs at least 2 points per axis");
    if (!(width > 2.0 * kMargin) || !(height > 2.0 * kMargin)) throw DomainError("portrait: canvas too small");
    if (!(t_max > 0.0)) throw DomainError("portrait: t_max must be positive");
}

std::string render_portrait(const PortraitConfig& cfg) {
    cfg.validate();
    const Frame fr{cfg.phi_min, cfg.phi_max, cfg.psi_min, cfg.psi_max, cfg.width, cfg.height};
    const double cell = std::min(fr.plot_w() / (cfg.cols - 1), fr.plot_h() / (cfg.rows - 1));
    const double len = 0.35 * cell;
    const double sx = fr.plot_w() / (cfg.phi_max - cfg.phi_min);
    const double sy = fr.plot_h() / (cfg.psi_max - cfg.psi_min);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(cfg.width) << "\" height=\""
        << fmt(cfg.height) << "\" viewBox=\"0 0 " << fmt(cfg.width) << ' ' << fmt(cfg.height) << "\">\n"
        << "<title>Phase portrait of the normalized Ricci flow on P_" << cfg.n << "</title>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fmt(cfg.width) << "\" height=\"" << fmt(cfg.height)
        << "\" fill=\"white\"/>\n"
        << "<rect class=\"frame\" x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\""
        << fmt(fr.plot_w()) << "\" height=\"" << fmt(fr.plot_h()) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Boundary of the admissible region, psi = +-phi.
    svg << "<g class=\"boundary\" stroke=\"gray\" stroke-dasharray=\"4 3\">\n";
    for (double sign : {1.0, -1.0}) {
        // phi-interval on which psi = sign * phi stays inside the box
        const double lo = std::max(cfg.phi_min, sign > 0 ? cfg.psi_min : -cfg.psi_max);
        const double hi = std::min(cfg.phi_max, sign > 0 ? cfg.psi_max : -cfg.psi_min);
        if (!(hi > lo)) continue;
        svg << "<line x1=\"" << fmt(fr.px(lo)) << "\" y1=\"" << fmt(fr.py(sign * lo)) << "\" x2=\""
            << fmt(fr.px(hi)) << "\" y2=\"" << fmt(fr.py(sign * hi)) << "\"/>\n";
    }
    svg << "</g>\n";

    if (cfg.psi_min <= 0.0 && cfg.psi_max >= 0.0) {
        svg << "<line class=\"submersion-axis\" x1=\"" << fmt(fr.px(cfg.phi_min)) << "\" y1=\"" << fmt(fr.py(0.0))
            << "\" x2=\"" << fmt(fr.px(cfg.phi_max)) << "\" y2=\"" << fmt(fr.py(0.0))
            << "\" stroke=\"crimson\" stroke-width=\"2\"/>\n";
    }

    svg << "<g class=\"field\" stroke=\"steelblue\" fill=\"steelblue\">\n";
    for (int i = 0; i < cfg.cols; ++i) {
        const double phi = cfg.phi_min + (cfg.phi_max - cfg.phi_min) * i / (cfg.cols - 1);
        for (int j = 0; j < cfg.rows; ++j) {
            const double psi = cfg.psi_min + (cfg.psi_max - cfg.psi_min) * j / (cfg.rows - 1);
            if (!(phi > std::abs(psi))) continue;
            Vec2 d{};
            try {
                d = rhs_phase(cfg.n, phi, psi);
            } catch (const RangeExceeded&) {
                continue;
            }
            if (!std::isfinite(d[0]) || !std::isfinite(d[1])) continue;

            const double x0 = fr.px(phi);
            const double y0 = fr.py(psi);
            const std::string at = " data-phi=\"" + fmt(phi) + "\" data-psi=\"" + fmt(psi) + "\"";
            if (std::abs(d[0]) + std::abs(d[1]) < kZeroField) {
                svg << "<circle class=\"fixed-point\"" << at << " cx=\"" << fmt(x0) << "\" cy=\"" << fmt(y0)
                    << "\" r=\"4\" fill=\"none\" stroke=\"darkorange\" stroke-width=\"2\"/>\n";
                continue;
            }
            double vx = d[0] * sx;
            double vy = -d[1] * sy;
            const double norm = std::hypot(vx, vy);
            vx /= norm;
            vy /= norm;
            const double x1 = x0 + len * vx;
            const double y1 = y0 + len * vy;
            // arrow head: two barbs at +-25 degrees
            const double hx = -vx * 0.3 * len;
            const double hy = -vy * 0.3 * len;
            const double c = std::cos(0.436), s = std::sin(0.436);
            svg << "<g class=\"arrow\"" << at << ">"
                << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1) << "\" y2=\""
                << fmt(y1) << "\"/>"
                << "<polygon points=\"" << fmt(x1) << ',' << fmt(y1) << ' ' << fmt(x1 + c * hx - s * hy) << ','
                << fmt(y1 + s * hx + c * hy) << ' ' << fmt(x1 + c * hx + s * hy) << ','
                << fmt(y1 - s * hx + c * hy) << "\"/></g>\n";
        }
    }
    svg << "</g>\n";

    if (!cfg.starts.empty()) {
        IntegratorConfig icfg;
        icfg.t_max = cfg.t_max;
        icfg.rel_tol = 1e-8;
        icfg.abs_tol = 1e-12;
        icfg.max_steps = 200000;
        const std::vector<SampleMonitor> box{
            {"phi_max", [](const Sample& s) { return s.phi; }, EventKind::ThresholdCross, cfg.phi_max, true},
            {"phi_min", [](const Sample& s) { return s.phi; }, EventKind::ThresholdCross, cfg.phi_min, true},
            {"psi_max", [](const Sample& s) { return s.psi; }, EventKind::ThresholdCross, cfg.psi_max, true},
            {"psi_min", [](const Sample& s) { return s.psi; }, EventKind::ThresholdCross, cfg.psi_min, true},
        };
        svg << "<g class=\"trajectories\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
        for (const auto& [phi0, psi0] : cfg.starts) {
            Trajectory traj;
            try {
                const std::array<double, 2> y0{phi0, psi0};
                traj = simulate(SystemKind::Phase, cfg.n, y0, icfg, box);
            } catch (const DomainError&) {
                continue;
            }
            svg << "<polyline class=\"trajectory\" data-phi0=\"" << fmt(phi0) << "\" data-psi0=\"" << fmt(psi0)
                << "\" points=\"";
            for (std::size_t k = 0; k < traj.samples.size(); ++k) {
                const auto& s = traj.samples[k];
                svg << (k ? " " : "") << fmt(fr.px(s.phi)) << ',' << fmt(fr.py(s.psi));
            }
            svg << "\"/>\n";
        }
        svg << "</g>\n";
    }

    svg << "<text x=\"" << fmt(fr.width / 2) << "\" y=\"" << fmt(fr.height - 15) << "\" text-anchor=\"middle\""
        << " font-family=\"sans-serif\" font-size=\"14\">phi in [" << fmt(cfg.phi_min) << ", " << fmt(cfg.phi_max)
        << "]</text>\n"
        << "<text x=\"15\" y=\"" << fmt(fr.height / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"14\" transform=\"rotate(-90 15 " << fmt(fr.height / 2) << ")\">psi in ["
        << fmt(cfg.psi_min) << ", " << fmt(cfg.psi_max) << "]</text>\n"
        << "</svg>\n";
    return svg.str();
}

}  // namespace ricci
