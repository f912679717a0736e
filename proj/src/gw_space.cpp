#include "ricci/gw_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "power_guard.hpp"

namespace ricci {

namespace {

constexpr double kProportionalityTol = 1e-12;

void require_pn_index(int n, const char* what) {
    if (n < 2) {
        throw DomainError(std::string(what) + ": n must be >= 2, got " + std::to_string(n));
    }
}

// (value, multiplicity) pairs sorted by value.
std::array<std::pair<double, int>, 3> sorted_eigenvalues(const RicciSpectrum& s) {
    std::array<std::pair<double, int>, 3> ev{{{s.r[0], s.mult[0]}, {s.r[1], s.mult[1]}, {s.r[2], s.mult[2]}}};
    std::sort(ev.begin(), ev.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    return ev;
}

double smallest_k_sum(const RicciSpectrum& s, int k) {
    double sum = 0.0;
    int remaining = k;
    for (const auto& [value, mult] : sorted_eigenvalues(s)) {
        const int take = std::min(remaining, mult);
        sum += take * value;
        remaining -= take;
        if (remaining == 0) break;
    }
    return sum;
}

}  // namespace

GWSpace::GWSpace(std::array<double, 3> a, std::array<int, 3> d) : a_(a), d_(d) {
    for (int i = 0; i < 3; ++i) {
        if (!(a_[i] > 0.0) || !std::isfinite(a_[i])) {
            throw DomainError("GWSpace: a_" + std::to_string(i + 1) + " must be positive and finite");
        }
        if (d_[i] < 1) {
            throw DomainError("GWSpace: d_" + std::to_string(i + 1) + " must be >= 1");
        }
    }
    const double p0 = d_[0] * a_[0];
    for (int i = 1; i < 3; ++i) {
        const double pi = d_[i] * a_[i];
        if (std::abs(pi - p0) > kProportionalityTol * std::max(std::abs(pi), std::abs(p0))) {
            throw DomainError("GWSpace: d_i * a_i must be equal for i = 1,2,3");
        }
    }
}

GWSpace make_pn(int n) {
    require_pn_index(n, "make_pn");
    const double a12 = 1.0 / (2.0 * (n + 2));
    const double a3 = (n - 1.0) / (2.0 * (n + 2));
    return GWSpace({a12, a12, a3}, {4 * (n - 1), 4 * (n - 1), 4});
}

int kn(int n) {
    require_pn_index(n, "kn");
    return n == 3 ? 6 : 4 * n - 7;
}

Metric::Metric(double x1_, double x2_, double x3_) : x1(x1_), x2(x2_), x3(x3_) {
    if (!(x1 > 0.0) || !(x2 > 0.0) || !(x3 > 0.0)) {
        throw DomainError("Metric: scale factors must be positive");
    }
}

double Metric::operator[](int i) const {
    switch (i) {
        case 0: return x1;
        case 1: return x2;
        case 2: return x3;
        default: throw DomainError("Metric: index out of range");
    }
}

PhasePoint::PhasePoint(double phi_, double psi_, int n_) : phi(phi_), psi(psi_), n(n_) {
    require_pn_index(n, "PhasePoint");
    if (!(phi > 0.0) || !(phi > std::abs(psi))) {
        throw DomainError("PhasePoint: requires phi > |psi|");
    }
}

RicciSpectrum::RicciSpectrum(std::array<double, 3> r_, std::array<int, 3> mult_)
    : r(r_), mult(mult_), scalar(mult_[0] * r_[0] + mult_[1] * r_[1] + mult_[2] * r_[2]) {}

RicciSpectrum ricci_coefficients(const GWSpace& space, const Metric& metric) {
    const std::array<double, 3> x{metric.x1, metric.x2, metric.x3};
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) {
        const double xi = x[i];
        const double xj = x[(i + 1) % 3];
        const double xk = x[(i + 2) % 3];
        // grouped so that swapping two x's swaps the r's bit-exactly
        r[i] = 1.0 / (2.0 * xi) + 0.5 * space.a(i) * (xi / (xj * xk) - (xk / (xi * xj) + xj / (xi * xk)));
    }
    return {r, space.d()};
}

double log_volume(const GWSpace& space, const Metric& metric) {
    return std::log(metric.x1) / space.a(0) + std::log(metric.x2) / space.a(1) +
           std::log(metric.x3) / space.a(2);
}

double volume(const GWSpace& space, const Metric& metric) {
    const double lv = log_volume(space, metric);
    if (lv > std::log(std::numeric_limits<double>::max()) ||
        lv < std::log(std::numeric_limits<double>::min())) {
        throw RangeExceeded("volume: result outside double range (log V = " + std::to_string(lv) + ")");
    }
    return std::exp(lv);
}

Metric normalize_to_unit_volume(const GWSpace& space, const Metric& metric) {
    const double total_exponent = 1.0 / space.a(0) + 1.0 / space.a(1) + 1.0 / space.a(2);
    const double c = std::exp(-log_volume(space, metric) / total_exponent);
    return metric.scaled(c);
}

double x3_from_volume_one(int n, double x1, double x2) {
    require_pn_index(n, "x3_from_volume_one");
    if (!(x1 > 0.0) || !(x2 > 0.0)) {
        throw DomainError("x3_from_volume_one: x1, x2 must be positive");
    }
    return std::pow(x1 * x2, -(n - 1.0));
}

PhasePoint to_phase(int n, double x1, double x2) {
    if (!(x1 > 0.0) || !(x2 > 0.0)) {
        throw DomainError("to_phase: x1, x2 must be positive");
    }
    return {x1 + x2, x1 - x2, n};
}

Metric from_phase(const PhasePoint& p) {
    const double x1 = 0.5 * (p.phi + p.psi);
    const double x2 = 0.5 * (p.phi - p.psi);
    return {x1, x2, x3_from_volume_one(p.n, x1, x2)};
}

RicciSpectrum ricci_phase(const PhasePoint& p) {
    const int n = p.n;
    const double phi = p.phi;
    const double psi = p.psi;
    detail::guard_phase_powers(n, phi);

    const double s = phi * phi - psi * psi;
    const double four_nm1 = std::pow(4.0, n - 1);
    const double s_nm2 = std::pow(s, n - 2);
    const double s_n = std::pow(s, n);

    // Terms shared by r1 and r2; the off-diagonal one flips sign with psi.
    const double odd = phi * psi * s_nm2 / (four_nm1 * (n + 2));
    const double inv = four_nm1 / ((n + 2) * s_n);

    const double r1 = 1.0 / (phi + psi) + odd - inv;
    const double r2 = 1.0 / (phi - psi) - odd - inv;
    const double r3 = std::pow(s, n - 1) / (2.0 * four_nm1) -
                      (n - 1) * (phi * phi + psi * psi) * s_nm2 / (2.0 * four_nm1 * (n + 2)) +
                      four_nm1 * (n - 1) / ((n + 2) * s_n);
    return {{r1, r2, r3}, {4 * (n - 1), 4 * (n - 1), 4}};
}

bool k_positive(const RicciSpectrum& spectrum, int k) {
    if (k < 1 || k > spectrum.dimension()) {
        throw DomainError("k_positive: k must lie in [1, d], got " + std::to_string(k));
    }
    return smallest_k_sum(spectrum, k) > 0.0;
}

int negative_count(const RicciSpectrum& spectrum) {
    int count = 0;
    for (int i = 0; i < 3; ++i) {
        if (spectrum.r[i] < 0.0) count += spectrum.mult[i];
    }
    return count;
}

std::optional<int> smallest_k_positive(const RicciSpectrum& spectrum) {
    // Eigenvalues are taken in ascending order, so once the partial sum turns
    // positive it stays positive.
    const int d = spectrum.dimension();
    for (int k = 1; k <= d; ++k) {
        if (smallest_k_sum(spectrum, k) > 0.0) return k;
    }
    return std::nullopt;
}

}  // namespace ricci
