#pragma once

// Three-summand homogeneous spaces (generalized Wallach spaces), their
// invariant metrics, Ricci eigenvalues, volume and positivity bookkeeping.
//
// An invariant metric is g = x1 Q|p1 + x2 Q|p2 + x3 Q|p3. Its Ricci tensor
// has eigenvalue r_i with multiplicity d_i = dim p_i.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace ricci {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a quantity leaves the representable floating-point range.
class RangeExceeded : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Descriptor of a three-summand space: structure constants a_i and module
/// dimensions d_i. The constructor enforces d1 a1 = d2 a2 = d3 a3, which is
/// what makes the volume functional a conserved quantity of the normalized flow.
class GWSpace {
public:
    GWSpace(std::array<double, 3> a, std::array<int, 3> d);

    [[nodiscard]] const std::array<double, 3>& a() const noexcept { return a_; }
    [[nodiscard]] const std::array<int, 3>& d() const noexcept { return d_; }
    [[nodiscard]] double a(int i) const { return a_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] int d(int i) const { return d_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] int dimension() const noexcept { return d_[0] + d_[1] + d_[2]; }

private:
    std::array<double, 3> a_;
    std::array<int, 3> d_;
};

/// The space P_n = Sp(n+1)/(Sp(n-1) x Sp(1) x Sp(1)), n >= 2, of dimension 8n-4.
[[nodiscard]] GWSpace make_pn(int n);

/// Index k(n) for which P_n carries invariant metrics with Ric_k > 0.
[[nodiscard]] int kn(int n);

/// Scale factors of Q on the three summands; all strictly positive.
struct Metric {
    double x1;
    double x2;
    double x3;

    Metric(double x1_, double x2_, double x3_);

    [[nodiscard]] double operator[](int i) const;
    [[nodiscard]] Metric scaled(double c) const { return {c * x1, c * x2, c * x3}; }
};

/// Phase coordinates phi = x1 + x2, psi = x1 - x2 on the unit-volume slice of P_n.
struct PhasePoint {
    double phi;
    double psi;
    int n;

    PhasePoint(double phi_, double psi_, int n_);
};

/// Ricci eigenvalues with multiplicities and the scalar curvature.
struct RicciSpectrum {
    std::array<double, 3> r{};
    std::array<int, 3> mult{};
    double scalar = 0.0;

    RicciSpectrum() = default;
    RicciSpectrum(std::array<double, 3> r_, std::array<int, 3> mult_);

    [[nodiscard]] int dimension() const noexcept { return mult[0] + mult[1] + mult[2]; }
};

[[nodiscard]] RicciSpectrum ricci_coefficients(const GWSpace& space, const Metric& metric);

/// Logarithm of the volume, sum_i (1/a_i) log x_i.
[[nodiscard]] double log_volume(const GWSpace& space, const Metric& metric);

/// V = x1^(1/a1) x2^(1/a2) x3^(1/a3), accumulated in log space.
/// Throws RangeExceeded if the result is not representable.
[[nodiscard]] double volume(const GWSpace& space, const Metric& metric);

/// Rescales the metric homothetically so that its volume is 1.
[[nodiscard]] Metric normalize_to_unit_volume(const GWSpace& space, const Metric& metric);

/// x3 = (x1 x2)^-(n-1): the unique x3 giving P_n-volume 1.
[[nodiscard]] double x3_from_volume_one(int n, double x1, double x2);

[[nodiscard]] PhasePoint to_phase(int n, double x1, double x2);

/// Inverse of to_phase, completed to a unit-volume metric of P_n.
[[nodiscard]] Metric from_phase(const PhasePoint& p);

/// Ricci eigenvalues of the unit-volume P_n metric written directly in phase
/// coordinates. Independent transcription of the x-coordinate formula.
[[nodiscard]] RicciSpectrum ricci_phase(const PhasePoint& p);

/// True if the sum of the k smallest eigenvalues (with multiplicity) is > 0.
[[nodiscard]] bool k_positive(const RicciSpectrum& spectrum, int k);

/// Number of strictly negative eigenvalues counted with multiplicity.
[[nodiscard]] int negative_count(const RicciSpectrum& spectrum);

/// Smallest k in [1, d] for which the spectrum is k-positive, if any.
[[nodiscard]] std::optional<int> smallest_k_positive(const RicciSpectrum& spectrum);

}  // namespace ricci
