#include "mgr/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mgr {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClampTol = 1e-12;

double require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InfeasibleError(std::string(what) + " is not finite");
    return v;
}

}  // namespace

void ShapeParams::validate() const {
    if (!(b > 0.0)) throw std::invalid_argument("ShapeParams: b must be > 0");
    if (!(alpha > 0.0) || alpha > kPi)
        throw std::invalid_argument("ShapeParams: alpha must be in (0, pi]");
    if (!(tau > 0.0)) throw std::invalid_argument("ShapeParams: tau must be > 0");
    if (!(xi > 0.0)) throw std::invalid_argument("ShapeParams: xi must be > 0");
    if (sigma < 0.0) throw std::invalid_argument("ShapeParams: sigma must be >= 0");
}

double ShapeParams::sigma_limit() const { return tau * (1.0 - std::cos(alpha / 2.0)); }

double alpha_prime(double alpha, double tau, double sigma) {
    if (!(alpha > 0.0) || alpha > kPi)
        throw std::invalid_argument("alpha_prime: alpha must be in (0, pi]");
    if (!(tau > 0.0)) throw std::invalid_argument("alpha_prime: tau must be > 0");
    if (sigma < 0.0) throw std::invalid_argument("alpha_prime: sigma must be >= 0");
    const double ts = tau - sigma;
    if (!(ts > 0.0)) throw InfeasibleError("alpha_prime: sigma >= tau");
    const double c = std::cos(alpha / 2.0);
    double arg = (2.0 * ts * ts - 4.0 * tau * tau * c * c) / (2.0 * ts * ts);
    if (arg < -1.0 - kClampTol || arg > 1.0 + kClampTol)
        throw InfeasibleError("alpha_prime: sigma beyond tube limit");
    arg = std::clamp(arg, -1.0, 1.0);
    return kPi - std::acos(arg);
}

double shell_inner_radius(double delta, const ShapeParams& p) {
    p.validate();
    if (!(delta > 0.0)) throw std::invalid_argument("shell_inner_radius: delta must be > 0");
    const double ap = alpha_prime(p.alpha, p.tau, p.sigma);
    const double s2 = std::sin(ap / 2.0);
    const double s4 = std::sin(ap / 4.0);
    if (!(s4 > 0.0)) throw InfeasibleError("shell_inner_radius: alpha' = 0");
    // The two tau terms nearly cancel; group them so they cannot swallow
    // the delta terms.
    const double wedge = p.tau * std::sin(p.alpha / 2.0) - (p.tau - p.sigma) * s2;
    return require_finite(delta / 2.0 + p.sigma + wedge + delta / (2.0 * s4), "r");
}

double expansion_radius(double delta, const ShapeParams& p) {
    const double r = shell_inner_radius(delta, p);
    const double ap = alpha_prime(p.alpha, p.tau, p.sigma);
    const double s2 = std::sin(ap / 2.0);
    if (!(s2 > 0.0)) throw InfeasibleError("expansion_radius: alpha' = 0");
    const double wedge = p.tau * std::sin(p.alpha / 2.0) - (p.tau - p.sigma) * s2;
    return require_finite(delta / 2.0 + wedge + (r + delta) / s2, "p11");
}

double f_bound(const ShapeParams& p) {
    p.validate();
    const double ap = alpha_prime(p.alpha, p.tau, p.sigma);
    const double s2 = std::sin(ap / 2.0);
    const double s4 = std::sin(ap / 4.0);
    if (!(s2 > 0.0) || !(s4 > 0.0)) throw InfeasibleError("f_bound: alpha' = 0");
    const double m = std::min(p.b, p.alpha * p.tau);
    const double wedge = p.tau * std::sin(p.alpha / 2.0) - (p.tau - p.sigma) * s2;
    const double num = (p.tau - p.sigma) * std::sin((m - (p.alpha - ap) * p.tau) / (2.0 * p.tau)) -
                       wedge * (1.0 + 2.0 / s2) - 2.0 * p.sigma / s2;
    const double den = 1.0 + 3.0 / s2 + 1.0 / (s2 * s4);
    return require_finite(num / den, "f");
}

namespace {

// Largest delta admitted by the shell condition r(delta) + delta < xi - 2 sigma;
// r is affine increasing in delta, so the bound is closed-form.
double cond9_delta_bound(const ShapeParams& p) {
    const double ap = alpha_prime(p.alpha, p.tau, p.sigma);
    const double s2 = std::sin(ap / 2.0);
    const double s4 = std::sin(ap / 4.0);
    if (!(s4 > 0.0)) throw InfeasibleError("cond9: alpha' = 0");
    return (p.xi - 3.0 * p.sigma - p.tau * std::sin(p.alpha / 2.0) + (p.tau - p.sigma) * s2) /
           (1.5 + 1.0 / (2.0 * s4));
}

bool conditions_hold(double delta, const ShapeParams& p, double f) {
    if (!(delta > 0.0) || !(delta < f)) return false;
    const double rd = shell_inner_radius(delta, p) + delta;
    return rd > 0.0 && rd < p.xi - 2.0 * p.sigma;
}

}  // namespace

FeasibilityReport check_reconstruction_conditions(double delta, const ShapeParams& p) {
    p.validate();
    FeasibilityReport rep;
    rep.alpha_prime = alpha_prime(p.alpha, p.tau, p.sigma);
    rep.f_value = f_bound(p);
    if (delta > 0.0) {
        rep.r = shell_inner_radius(delta, p);
        rep.p11 = expansion_radius(delta, p);
        const double rd = rep.r + delta;
        rep.cond9_ok = rd > 0.0 && rd < p.xi - 2.0 * p.sigma;
        rep.cond10_ok = delta < rep.f_value;
    }
    rep.cond15_ok = tube_feasibility(p);

    // Both conditions are monotone in delta (r affine increasing, f
    // constant), so the feasible set is an interval (0, max_delta);
    // bisect on its right endpoint.
    double hi = std::max({rep.f_value, p.xi, delta, 1.0});
    if (conditions_hold(hi, p, rep.f_value)) {
        rep.max_delta = hi;  // unbounded in practice never happens; hi is a cap
    } else {
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (conditions_hold(mid, p, rep.f_value))
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-10 * std::max(1e-300, lo)) break;
        }
        rep.max_delta = lo;
    }
    return rep;
}

bool tube_feasibility(const ShapeParams& p) {
    p.validate();
    try {
        return std::min(cond9_delta_bound(p), f_bound(p)) > 0.0;
    } catch (const InfeasibleError&) {
        return false;
    }
}

double delta_noiseless(const ShapeParams& p) {
    p.validate();
    if (p.sigma != 0.0) throw std::invalid_argument("delta_noiseless: sigma must be 0");
    const double s2 = std::sin(p.alpha / 2.0);
    const double s4 = std::sin(p.alpha / 4.0);
    const double branch1 = p.xi * 2.0 * s4 / (3.0 * s4 + 1.0);
    const double branch2 = (p.tau * s2 * s4 / (s2 * s4 + 3.0 * s4 + 1.0)) *
                           std::sin(std::min(p.b, p.alpha * p.tau) / (2.0 * p.tau));
    return 0.5 * std::min(branch1, branch2);
}

double delta_tubular(const ShapeParams& p, double c0) {
    p.validate();
    if (!(c0 > 0.0) || !(c0 < 1.0))
        throw std::invalid_argument("delta_tubular: c0 must be in (0, 1)");
    if (!tube_feasibility(p)) throw InfeasibleError("delta_tubular: condition (15) fails");
    return c0 * std::min(cond9_delta_bound(p), f_bound(p));
}

long sample_size_noiseless(double graph_length, double a, double delta, double lambda) {
    if (!(graph_length > 0.0) || !(a > 0.0) || !(delta > 0.0) || !(lambda > 0.0) ||
        lambda >= 1.0)
        throw std::invalid_argument("sample_size_noiseless: invalid argument");
    const double n = (4.0 * graph_length / (a * delta)) *
                     (std::log(8.0 * graph_length / delta) + std::log(1.0 / lambda));
    return static_cast<long>(std::ceil(n));
}

long sample_size_tubular(double graph_length, double tau, double sigma, double delta,
                         double lambda, double c_prime_d) {
    if (!(graph_length > 0.0) || !(tau > 0.0) || !(delta > 0.0) || !(lambda > 0.0) ||
        lambda >= 1.0 || !(c_prime_d > 0.0))
        throw std::invalid_argument("sample_size_tubular: invalid argument");
    if (!(sigma > 0.0) || !(sigma < std::min(3.0 * tau / 16.0, delta / 8.0)))
        throw std::invalid_argument(
            "sample_size_tubular: requires 0 < sigma < min(3 tau/16, delta/8)");
    const double n = (tau * graph_length / (c_prime_d * delta * (tau - 8.0 * sigma))) *
                     (std::log(16.0 * graph_length / delta) + std::log(1.0 / lambda));
    return static_cast<long>(std::ceil(n));
}

}  // namespace mgr
