#include "ricci/flow_systems.hpp"

#include <cmath>
#include <string>

#include "power_guard.hpp"

namespace ricci {

namespace {

void require_n(int n, const char* what) {
    if (n < 2) throw DomainError(std::string(what) + ": n must be >= 2");
}

}  // namespace

Vec3 rhs_full(const GWSpace& space, const Metric& metric, FlowNormalization norm) {
    const RicciSpectrum ric = ricci_coefficients(space, metric);
    const double drift =
        norm == FlowNormalization::Normalized ? 2.0 * ric.scalar / space.dimension() : 0.0;
    return {(-2.0 * ric.r[0] + drift) * metric.x1,
            (-2.0 * ric.r[1] + drift) * metric.x2,
            (-2.0 * ric.r[2] + drift) * metric.x3};
}

Vec2 rhs_reduced_x(int n, double x1, double x2) {
    require_n(n, "rhs_reduced_x");
    if (!(x1 > 0.0) || !(x2 > 0.0)) throw DomainError("rhs_reduced_x: x1, x2 must be positive");
    detail::guard_phase_powers(n, x1 + x2);

    const double np2 = n + 2.0;
    const double a = std::pow(x1, n) * std::pow(x2, n - 2);      // x1^n x2^(n-2)
    const double b = std::pow(x1, n - 2) * std::pow(x2, n);      // x1^(n-2) x2^n
    const double c = 1.0 / (std::pow(x1, n) * std::pow(x2, n));  // 1/(x1^n x2^n)
    const double p = std::pow(x1 * x2, n - 1);

    const double B = (2.0 * np2 * (1.0 / x1 + 1.0 / x2 + p / (n - 1.0)) - a - b - c) * (n - 1.0) /
                     (2.0 * np2 * (2.0 * n - 1.0));

    const double dx1 = -1.0 - x1 / (2.0 * np2) * (a - b - c) + x1 * B;
    const double dx2 = -1.0 - x2 / (2.0 * np2) * (-a + b - c) + x2 * B;
    return {dx1, dx2};
}

Vec2 rhs_phase(int n, double phi, double psi) {
    require_n(n, "rhs_phase");
    if (!(phi > std::abs(psi))) throw DomainError("rhs_phase: requires phi > |psi|");
    detail::guard_phase_powers(n, phi);

    const double np2 = n + 2.0;
    const double tnm1 = 2.0 * n - 1.0;
    const double phi2 = phi * phi;
    const double psi2 = psi * psi;
    const double s = phi2 - psi2;
    const double four_nm1 = std::pow(4.0, n - 1);
    const double poly = std::pow(s, n - 2) / (four_nm1 * np2 * tnm1);
    const double inv = std::pow(4.0, n) * n / (2.0 * np2 * tnm1 * std::pow(s, n));
    const double mixed = (n - 1.0) / tnm1 * 4.0 / s;

    const double dphi = -2.0 + poly * (3.0 * phi2 * phi - (6.0 * n - 1.0) * phi * psi2) + inv * phi +
                        mixed * phi2;
    const double dpsi = psi * (poly * ((5.0 - 4.0 * n) * phi2 - (2.0 * n + 1.0) * psi2) + inv + mixed * phi);
    return {dphi, dpsi};
}

double rhs_submersion(int n, double phi) {
    require_n(n, "rhs_submersion");
    if (!(phi > 0.0)) throw DomainError("rhs_submersion: phi must be positive");
    detail::guard_phase_powers(n, phi);

    const double np2 = n + 2.0;
    const double p = std::pow(phi, 2 * n - 1);
    return (-2.0 + 3.0 * p / (std::pow(4.0, n - 1) * np2) + std::pow(4.0, n) * n / (2.0 * np2 * p)) /
           (2.0 * n - 1.0);
}

Vec2 rhs_reparam(int n, double phi, double psi) {
    const auto [dphi, dpsi] = rhs_phase(n, phi, psi);
    if (!(dphi > 0.0)) {
        throw ReparamInvalid("rhs_reparam: phi' = " + std::to_string(dphi) + " <= 0 at phi = " +
                             std::to_string(phi) + ", psi = " + std::to_string(psi));
    }
    return {1.0, dpsi / dphi};
}

}  // namespace ricci
