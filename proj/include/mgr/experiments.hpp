#pragma once

#include <cstdint>
#include <vector>

#include "mgr/params.hpp"
#include "mgr/reconstruct.hpp"
#include "mgr/synth.hpp"

namespace mgr {

/// How the Rips scale is chosen for an experiment: given explicitly, or
/// derived from the shape parameters (noiseless or tubular closed form,
/// the latter scaled by c0).
struct DeltaPolicy {
    enum class Mode { Explicit, Noiseless, Tubular };
    Mode mode = Mode::Noiseless;
    double delta = 0.0;  // Explicit
    double c0 = 0.9;     // Tubular
};

struct ExperimentSpec {
    TubeModel model;
    ShapeParams params;
    DeltaPolicy policy;
    std::vector<std::size_t> n_values;  // positive, strictly increasing
    int trials = 0;
    std::uint64_t base_seed = 0;
};

struct RiskEstimate {
    std::size_t n = 0;
    int trials = 0;
    int failures = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double wall_ms = 0.0;
};

/// 95% Wilson score interval for failures/trials.
std::pair<double, double> wilson_interval(int failures, int trials);

/// Reconstruction configuration implied by params + policy: delta from the
/// policy, r and p11 from the closed-form radii.
ReconstructionConfig config_for(const ShapeParams& params, const DeltaPolicy& policy);

/// Success of a single already-sampled cloud: reconstruction not flagged
/// and output isomorphic to the truth.
bool trial_outcome(const Pseudograph& truth, const ReconstructionConfig& cfg,
                   const PointCloud& cloud);

/// One seeded trial: sample n points (tube or noiseless according to
/// model.sigma), reconstruct, compare. Flagged diagnostics count as
/// failure.
bool run_trial(const TubeModel& model, const ShapeParams& params,
               const ReconstructionConfig& cfg, std::size_t n, std::uint64_t seed);

/// Monte Carlo risk curve: independent trials at each n with per-trial
/// seeds derived from (base_seed, n, trial); bitwise deterministic for a
/// fixed spec.
std::vector<RiskEstimate> estimate_risk(const ExperimentSpec& spec);

}  // namespace mgr
