#pragma once

#include <stdexcept>

namespace mgr {

/// Raised when a parameter combination admits no valid reconstruction
/// scale (e.g. tube radius at or past the geometric limit).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape parameters of a metric graph: shortest edge b, smallest angle
/// alpha (radians, in (0, pi]), local reach tau, global reach xi, tube
/// radius sigma. All lengths share one unit.
struct ShapeParams {
    double b = 0.0;
    double alpha = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double sigma = 0.0;

    void validate() const;

    /// Largest sigma for which the tube angle is defined:
    /// tau * (1 - cos(alpha/2)).
    double sigma_limit() const;
};

struct FeasibilityReport {
    double alpha_prime = 0.0;
    double r = 0.0;
    double p11 = 0.0;
    double f_value = 0.0;
    bool cond9_ok = false;
    bool cond10_ok = false;
    bool cond15_ok = false;
    double max_delta = 0.0;
};

/// Smallest angle formed by the inner faces of the sigma-tube at a vertex
/// of angle alpha between reach-tau edges:
///   alpha' = pi - arccos[(2(tau-sigma)^2 - 4 tau^2 cos^2(alpha/2)) / (2(tau-sigma)^2)].
/// Equals alpha at sigma = 0, decreases to 0 at the sigma limit. The arccos
/// argument is clamped to [-1, 1] within 1e-12; beyond that the sigma is
/// rejected as infeasible.
double alpha_prime(double alpha, double tau, double sigma);

/// Inner shell radius:
///   r = delta/2 + sigma + tau sin(alpha/2) - (tau-sigma) sin(alpha'/2)
///     + delta / (2 sin(alpha'/4)).
double shell_inner_radius(double delta, const ShapeParams& p);

/// Vertex-expansion radius:
///   p11 = delta/2 + tau sin(alpha/2) - (tau-sigma) sin(alpha'/2)
///       + (r + delta) / sin(alpha'/2).
double expansion_radius(double delta, const ShapeParams& p);

/// Density threshold f(b, alpha, tau, xi, sigma); a Rips scale delta below
/// it (together with the shell condition) guarantees correct
/// reconstruction from a delta/2-dense sample.
double f_bound(const ShapeParams& p);

/// Evaluates the two reconstruction conditions at the given delta:
///   (9)  0 < r + delta < xi - 2 sigma
///   (10) 0 < delta < f
/// max_delta is the largest delta satisfying both, found by bisection to
/// 1e-10 relative (0 if none exists). cond15_ok reports tube feasibility.
FeasibilityReport check_reconstruction_conditions(double delta, const ShapeParams& p);

/// True iff min{ (xi - 3 sigma - tau sin(alpha/2) + (tau-sigma) sin(alpha'/2))
///               / (3/2 + 1/(2 sin(alpha'/4))),  f } > 0.
bool tube_feasibility(const ShapeParams& p);

/// Noiseless reconstruction scale (requires sigma == 0):
///   delta = 1/2 min{ xi 2 sin(a/4) / (3 sin(a/4) + 1),
///                    [tau sin(a/2) sin(a/4) / (sin(a/2) sin(a/4) + 3 sin(a/4) + 1)]
///                      * sin(min(b, a tau) / (2 tau)) }.
double delta_noiseless(const ShapeParams& p);

/// Tubular reconstruction scale, c0 in (0, 1):
///   delta = c0 * min{ (xi - 3 sigma - tau sin(a/2) + (tau-sigma) sin(a'/2))
///                     / (3/2 + 1/(2 sin(a'/4))),  f }.
double delta_tubular(const ShapeParams& p, double c0);

/// Sample size for a delta/2-dense noiseless sample with probability
/// >= 1 - lambda, density lower bound a:
///   n = ceil( (4 L / (a delta)) [log(8 L / delta) + log(1/lambda)] ).
long sample_size_noiseless(double graph_length, double a, double delta, double lambda);

/// Tubular counterpart; requires sigma < min{3 tau / 16, delta / 8}.
/// c_prime_d is the (abstract, caller-supplied) covering constant;
/// defaults to 1 for lack of a better value.
///   n = ceil( tau L / (c_prime_d delta (tau - 8 sigma))
///             * [log(16 L / delta) + log(1/lambda)] ).
long sample_size_tubular(double graph_length, double tau, double sigma, double delta,
                         double lambda, double c_prime_d = 1.0);

}  // namespace mgr
