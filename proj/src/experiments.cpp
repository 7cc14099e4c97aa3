#include "mgr/experiments.hpp"

#include <chrono>
#include <cmath>
#include <tuple>

#include "mgr/rng.hpp"

namespace mgr {

std::pair<double, double> wilson_interval(int failures, int trials) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (failures < 0 || failures > trials)
        throw std::invalid_argument("wilson_interval: failures out of range");
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double t = trials;
    const double p = static_cast<double>(failures) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    // at the extremes center -+ half is exactly the endpoint; pin it so
    // rounding cannot push the interval off the point estimate
    const double lo = failures == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = failures == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

ReconstructionConfig config_for(const ShapeParams& params, const DeltaPolicy& policy) {
    double delta = 0.0;
    switch (policy.mode) {
        case DeltaPolicy::Mode::Explicit:
            delta = policy.delta;
            break;
        case DeltaPolicy::Mode::Noiseless:
            delta = delta_noiseless(params);
            break;
        case DeltaPolicy::Mode::Tubular:
            delta = delta_tubular(params, policy.c0);
            break;
    }
    if (!(delta > 0)) throw InfeasibleError("config_for: derived delta is not positive");
    return {shell_inner_radius(delta, params), expansion_radius(delta, params), delta};
}

bool trial_outcome(const Pseudograph& truth, const ReconstructionConfig& cfg,
                   const PointCloud& cloud) {
    const auto rep = reconstruct(cloud, cfg);
    return !rep.flagged() && is_isomorphic(rep.graph, truth);
}

bool run_trial(const TubeModel& model, const ShapeParams& params,
               const ReconstructionConfig& cfg, std::size_t n, std::uint64_t seed) {
    (void)params;  // the config already encodes the derived radii
    const PointCloud cloud = model.sigma > 0 ? sample_tube(model, n, seed)
                                             : sample_noiseless(model.graph, n, seed);
    return trial_outcome(model.graph.topology(), cfg, cloud);
}

std::vector<RiskEstimate> estimate_risk(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("estimate_risk: trials must be >= 1");
    if (spec.n_values.empty()) throw std::invalid_argument("estimate_risk: no n values");
    for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
        if (spec.n_values[i] == 0)
            throw std::invalid_argument("estimate_risk: n values must be positive");
        if (i > 0 && spec.n_values[i] <= spec.n_values[i - 1])
            throw std::invalid_argument("estimate_risk: n values must be increasing");
    }

    const ReconstructionConfig cfg = config_for(spec.params, spec.policy);
    const Pseudograph truth = spec.model.graph.topology();

    std::vector<RiskEstimate> out;
    out.reserve(spec.n_values.size());
    for (std::size_t n : spec.n_values) {
        const auto t0 = std::chrono::steady_clock::now();
        int failures = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : failures)
#endif
        for (int t = 0; t < spec.trials; ++t) {
            const std::uint64_t seed = derive_seed(spec.base_seed, n, t);
            const PointCloud cloud = spec.model.sigma > 0
                                         ? sample_tube(spec.model, n, seed)
                                         : sample_noiseless(spec.model.graph, n, seed);
            if (!trial_outcome(truth, cfg, cloud)) failures += 1;
        }
        const auto t1 = std::chrono::steady_clock::now();
        RiskEstimate est;
        est.n = n;
        est.trials = spec.trials;
        est.failures = failures;
        est.estimate = static_cast<double>(failures) / spec.trials;
        std::tie(est.ci_low, est.ci_high) = wilson_interval(failures, spec.trials);
        est.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        out.push_back(est);
    }
    return out;
}

}  // namespace mgr
