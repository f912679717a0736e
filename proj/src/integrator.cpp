#include "ricci/integrator.hpp"

namespace ricci {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(initial_step > 0.0) || !(max_step > 0.0) ||
        !(event_tol > 0.0)) {
        throw DomainError("IntegratorConfig: tolerances and step sizes must be positive");
    }
    if (!(t_max > 0.0)) throw DomainError("IntegratorConfig: t_max must be positive");
    if (max_steps < 1) throw DomainError("IntegratorConfig: max_steps must be >= 1");
}

std::string to_string(Termination term) {
    switch (term) {
        case Termination::ReachedTmax: return "ReachedTmax";
        case Termination::EventStop: return "EventStop";
        case Termination::StepUnderflow: return "StepUnderflow";
        case Termination::RangeExceeded: return "RangeExceeded";
        case Termination::NonFinite: return "NonFinite";
        case Termination::MaxSteps: return "MaxSteps";
    }
    return "Unknown";
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::SignChange: return "SignChange";
        case EventKind::ThresholdCross: return "ThresholdCross";
        case EventKind::StopCondition: return "StopCondition";
    }
    return "Unknown";
}

double locate_sign_change(const std::function<double(double)>& g, double t_lo, double t_hi, double tol) {
    const double g_lo = g(t_lo);
    const double g_hi = g(t_hi);
    if (!(g_lo * g_hi < 0.0)) {
        throw NoBracket("locate_sign_change: g(t_lo) and g(t_hi) do not differ in sign");
    }
    const int s_lo = g_lo > 0.0 ? 1 : -1;
    double lo = t_lo;
    double hi = t_hi;
    while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0 ? 1 : -1) == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ricci
