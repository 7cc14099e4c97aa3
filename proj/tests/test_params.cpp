#include <doctest.h>

#include <cmath>

#include "mgr/params.hpp"
#include "mgr/rng.hpp"

using namespace mgr;

namespace {

constexpr double kPi = 3.14159265358979323846;

ShapeParams random_params(std::mt19937_64& rng, double sigma_frac = 0.0) {
    ShapeParams p;
    p.alpha = 0.2 + uniform01(rng) * (kPi - 0.4);
    p.tau = 0.5 + uniform01(rng) * 30.0;
    p.b = p.tau * (0.2 + uniform01(rng) * 3.0);
    p.xi = p.tau * (0.1 + uniform01(rng) * 1.0);
    p.sigma = sigma_frac * p.sigma_limit();
    return p;
}

}  // namespace

TEST_CASE("alpha_prime identity at sigma zero") {
    std::mt19937_64 rng(1);
    for (int it = 0; it < 200; ++it) {
        const double alpha = 1e-3 + uniform01(rng) * (kPi - 1e-3);
        const double tau = 1e-2 + uniform01(rng) * 100.0;
        CHECK(alpha_prime(alpha, tau, 0.0) == doctest::Approx(alpha).epsilon(1e-12));
    }
    CHECK(alpha_prime(kPi, 3.0, 0.0) == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("alpha_prime vanishes at the sigma limit and rejects beyond") {
    const double alpha = kPi / 2, tau = 1.0;
    const double smax = tau * (1.0 - std::cos(alpha / 2));
    CHECK(alpha_prime(alpha, tau, smax) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK_THROWS_AS(alpha_prime(alpha, tau, smax * 1.01), InfeasibleError);
}

TEST_CASE("alpha_prime frozen value") {
    // reference from a 50-digit evaluation of the tube-angle formula
    CHECK(alpha_prime(kPi / 2, 1.0, 0.05) ==
          doctest::Approx(1.462551828454563584).epsilon(1e-12));
}

TEST_CASE("alpha_prime stays within [0, alpha] and decreases in sigma") {
    std::mt19937_64 rng(2);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);
        const double smax = p.sigma_limit();
        double prev = p.alpha + 1e-12;
        for (double frac : {0.0, 0.2, 0.5, 0.8, 0.99}) {
            const double ap = alpha_prime(p.alpha, p.tau, frac * smax);
            CHECK(ap >= 0.0);
            CHECK(ap <= p.alpha * (1 + 1e-12));
            CHECK(ap <= prev + 1e-12);
            prev = ap;
        }
    }
}

TEST_CASE("shell_inner_radius closed forms at sigma zero") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);
        const double delta = 0.01 + uniform01(rng);
        const double expect = delta / 2 + delta / (2 * std::sin(p.alpha / 4));
        CHECK(shell_inner_radius(delta, p) == doctest::Approx(expect).epsilon(1e-12));
    }
    ShapeParams flat{1.0, kPi, 1.0, 10.0, 0.0};
    CHECK(shell_inner_radius(0.2, flat) ==
          doctest::Approx(0.24142135623730950488).epsilon(1e-12));
}

TEST_CASE("shell_inner_radius strictly increasing in delta") {
    std::mt19937_64 rng(4);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng, uniform01(rng) * 0.5);
        const double delta = 0.01 + uniform01(rng);
        CHECK(shell_inner_radius(delta * 1.001, p) > shell_inner_radius(delta, p));
    }
}

TEST_CASE("expansion_radius closed form and frozen value") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);
        const double delta = 0.01 + uniform01(rng);
        const double r = shell_inner_radius(delta, p);
        const double expect = delta / 2 + (r + delta) / std::sin(p.alpha / 2);
        CHECK(expansion_radius(delta, p) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(expansion_radius(delta, p) > r);  // p11 > r at sigma = 0
    }
    ShapeParams p{100.0, kPi / 2, 1.0, 10.0, 0.0};
    CHECK(shell_inner_radius(0.1, p) ==
          doctest::Approx(0.18065629648763765279).epsilon(1e-12));
    CHECK(expansion_radius(0.1, p) ==
          doctest::Approx(0.44690794085822160855).epsilon(1e-12));
}

TEST_CASE("f_bound noiseless reduction and frozen neuron value") {
    std::mt19937_64 rng(6);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);
        const double s2 = std::sin(p.alpha / 2), s4 = std::sin(p.alpha / 4);
        const double expect = p.tau * std::sin(std::min(p.b, p.alpha * p.tau) / (2 * p.tau)) /
                              (1 + 3 / s2 + 1 / (s2 * s4));
        CHECK(f_bound(p) == doctest::Approx(expect).epsilon(1e-12));
    }
    ShapeParams neuron{100.0, kPi / 3, 30.0, 50.0, 0.0};
    CHECK(f_bound(neuron) == doctest::Approx(1.0185092594304129629).epsilon(1e-12));
}

TEST_CASE("f_bound strictly decreasing in sigma while positive") {
    // the threshold is a decreasing function of sigma on its useful range;
    // once f has gone negative (no feasible delta) the ratio creeps back
    // toward zero, so the check stops at the first non-positive value
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);
        const double smax = p.sigma_limit();
        double prev = std::numeric_limits<double>::infinity();
        for (double frac : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9}) {
            p.sigma = frac * smax;
            const double f = f_bound(p);
            CHECK(f < prev);
            ++checked;
            prev = f;
            if (!(f > 0)) break;
        }
    }
    CHECK(checked >= 200);  // every draw starts positive at sigma = 0
}

TEST_CASE("check_reconstruction_conditions brackets max_delta") {
    std::mt19937_64 rng(8);
    int feasible = 0;
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng, uniform01(rng) * 0.3);
        const auto rep = check_reconstruction_conditions(0.0, p);
        CHECK_FALSE(rep.cond9_ok);  // delta = 0 always fails
        CHECK_FALSE(rep.cond10_ok);
        if (rep.max_delta <= 0) continue;
        ++feasible;
        const auto below = check_reconstruction_conditions(rep.max_delta * (1 - 1e-6), p);
        CHECK(below.cond9_ok);
        CHECK(below.cond10_ok);
        const auto above = check_reconstruction_conditions(rep.max_delta * (1 + 1e-6), p);
        CHECK_FALSE((above.cond9_ok && above.cond10_ok));
    }
    CHECK(feasible > 20);
}

TEST_CASE("max_delta equals the closed-form bound") {
    // conditions (9) and (10) are monotone, so the bisection result must
    // match min{ (xi - 3s - tau sin(a/2) + (tau-s) sin(a'/2)) / (3/2 + 1/(2 sin(a'/4))), f }
    std::mt19937_64 rng(9);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng, uniform01(rng) * 0.3);
        const double ap = alpha_prime(p.alpha, p.tau, p.sigma);
        const double bound9 = (p.xi - 3 * p.sigma - p.tau * std::sin(p.alpha / 2) +
                               (p.tau - p.sigma) * std::sin(ap / 2)) /
                              (1.5 + 1 / (2 * std::sin(ap / 4)));
        const double expect = std::min(bound9, f_bound(p));
        const auto rep = check_reconstruction_conditions(0.0, p);
        if (expect <= 0)
            CHECK(rep.max_delta == 0.0);
        else
            CHECK(rep.max_delta == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("cond9 simplification at alpha = pi, sigma = 0") {
    ShapeParams p{5.0, kPi, 1.0, 0.8, 0.0};
    p.b = 1e9;  // push the f-branch out of the way via a huge shortest edge
    p.tau = 1e9;
    const double coef = 1.5 + 1 / (2 * std::sin(kPi / 4));
    const auto rep = check_reconstruction_conditions(0.0, p);
    CHECK(rep.max_delta == doctest::Approx(p.xi / coef).epsilon(1e-8));
}

TEST_CASE("tube_feasibility") {
    ShapeParams neuron{100.0, kPi / 3, 30.0, 50.0, 0.0};
    CHECK(tube_feasibility(neuron));
    std::mt19937_64 rng(10);
    for (int it = 0; it < 50; ++it) {
        auto p = random_params(rng);
        CHECK(tube_feasibility(p) == (check_reconstruction_conditions(0.0, p).max_delta > 0));
        p.sigma = 0.999 * p.sigma_limit();
        CHECK_FALSE(tube_feasibility(p));  // alpha' -> 0 kills the bound
    }
}

TEST_CASE("delta_noiseless: identity with f_bound and feasibility") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);
        const double s2 = std::sin(p.alpha / 2), s4 = std::sin(p.alpha / 4);
        const double branch2 = (p.tau * s2 * s4 / (s2 * s4 + 3 * s4 + 1)) *
                               std::sin(std::min(p.b, p.alpha * p.tau) / (2 * p.tau));
        CHECK(branch2 == doctest::Approx(f_bound(p)).epsilon(1e-10));

        const double d = delta_noiseless(p);
        CHECK(d > 0);
        const auto rep = check_reconstruction_conditions(d, p);
        CHECK(rep.cond9_ok);
        CHECK(rep.cond10_ok);
    }
    ShapeParams neuron{100.0, kPi / 3, 30.0, 50.0, 0.0};
    CHECK(delta_noiseless(neuron) == doctest::Approx(0.50925462971520648147).epsilon(1e-12));
    neuron.sigma = 0.1;
    CHECK_THROWS_AS(delta_noiseless(neuron), std::invalid_argument);
}

TEST_CASE("delta_tubular: reduction, feasibility, monotone in c0") {
    std::mt19937_64 rng(12);
    for (int it = 0; it < 100; ++it) {
        auto p = random_params(rng);  // sigma = 0
        // as c0 -> 1 with sigma = 0 the second branch equals f
        const double near1 = delta_tubular(p, 0.999999);
        const double ap = alpha_prime(p.alpha, p.tau, 0.0);
        const double bound9 =
            (p.xi - p.tau * std::sin(p.alpha / 2) + p.tau * std::sin(ap / 2)) /
            (1.5 + 1 / (2 * std::sin(ap / 4)));
        CHECK(near1 == doctest::Approx(std::min(bound9, f_bound(p))).epsilon(1e-5));
        CHECK(delta_tubular(p, 0.45) == doctest::Approx(delta_tubular(p, 0.9) / 2).epsilon(1e-12));

        auto q = random_params(rng, 0.2 * uniform01(rng));
        if (tube_feasibility(q)) {
            const double d = delta_tubular(q, 0.9);
            const auto rep = check_reconstruction_conditions(d, q);
            CHECK(rep.cond9_ok);
            CHECK(rep.cond10_ok);
        }
    }
    ShapeParams dead{1.0, kPi / 2, 1.0, 0.01, 0.0};
    dead.sigma = 0.999 * dead.sigma_limit();
    CHECK_THROWS_AS(delta_tubular(dead, 0.9), InfeasibleError);
    ShapeParams ok{1.0, kPi / 2, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(delta_tubular(ok, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(delta_tubular(ok, 1.0), std::invalid_argument);
}

TEST_CASE("sample_size_noiseless") {
    CHECK(sample_size_noiseless(1.0, 1.0, 0.1, 0.1) == 268);
    // doubling 1/lambda adds (4 L / (a delta)) log 2 before the ceiling
    const double raw01 = (4.0 / 0.1) * (std::log(80.0) + std::log(10.0));
    const double raw005 = raw01 + (4.0 / 0.1) * std::log(2.0);
    CHECK(sample_size_noiseless(1.0, 1.0, 0.1, 0.05) == static_cast<long>(std::ceil(raw005)));

    std::mt19937_64 rng(13);
    for (int it = 0; it < 100; ++it) {
        const double L = 0.5 + uniform01(rng) * 10;
        const double a = 1.0 / L;
        const double d = 0.01 + uniform01(rng) * 0.2;
        CHECK(sample_size_noiseless(L, a, d * 1.05, 0.1) <= sample_size_noiseless(L, a, d, 0.1));
    }
    CHECK_THROWS_AS(sample_size_noiseless(0.0, 1.0, 0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(sample_size_noiseless(1.0, 1.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("sample_size_tubular") {
    // reference from a 50-digit evaluation of the tubular sample-size display
    CHECK(sample_size_tubular(4.0, 1.0, 0.05, 0.5, 0.05, 1.0) == 105);
    const double raw = (1.0 * 4.0 / (1.0 * 0.5 * (1.0 - 0.4))) *
                       (std::log(16 * 4.0 / 0.5) + std::log(20.0));
    CHECK(sample_size_tubular(4.0, 1.0, 0.05, 0.5, 0.05, 0.5) ==
          static_cast<long>(std::ceil(2 * raw)));
    CHECK_THROWS_AS(sample_size_tubular(4.0, 1.0, 0.2, 0.5, 0.05, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_size_tubular(4.0, 1.0, 0.0, 0.5, 0.05, 1.0), std::invalid_argument);
}

TEST_CASE("unit rescaling invariance") {
    std::mt19937_64 rng(14);
    for (int it = 0; it < 50; ++it) {
        auto p = random_params(rng, 0.3 * uniform01(rng));
        const double delta = 0.2 * f_bound(ShapeParams{p.b, p.alpha, p.tau, p.xi, 0.0});
        if (!(delta > 0)) continue;
        for (double c : {0.01, 7.3, 1000.0}) {
            ShapeParams q{p.b * c, p.alpha, p.tau * c, p.xi * c, p.sigma * c};
            CHECK(alpha_prime(q.alpha, q.tau, q.sigma) ==
                  doctest::Approx(alpha_prime(p.alpha, p.tau, p.sigma)).epsilon(1e-12));
            CHECK(shell_inner_radius(delta * c, q) ==
                  doctest::Approx(shell_inner_radius(delta, p) * c).epsilon(1e-9));
            CHECK(expansion_radius(delta * c, q) ==
                  doctest::Approx(expansion_radius(delta, p) * c).epsilon(1e-9));
            CHECK(f_bound(q) == doctest::Approx(f_bound(p) * c).epsilon(1e-9));
            const auto rp = check_reconstruction_conditions(delta, p);
            const auto rq = check_reconstruction_conditions(delta * c, q);
            CHECK(rp.cond9_ok == rq.cond9_ok);
            CHECK(rp.cond10_ok == rq.cond10_ok);
            CHECK(rp.cond15_ok == rq.cond15_ok);
            if (p.sigma == 0.0)
                CHECK(delta_noiseless(q) == doctest::Approx(delta_noiseless(p) * c).epsilon(1e-9));
        }
    }
}
