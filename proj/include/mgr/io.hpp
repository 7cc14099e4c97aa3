#pragma once

#include <stdexcept>
#include <string>

#include "mgr/experiments.hpp"
#include "mgr/geometry.hpp"
#include "mgr/pseudograph.hpp"
#include "mgr/synth.hpp"

namespace mgr {

/// File / parse failure; carries the offending path and line where known.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CloudFormat { Csv, Swc };
enum class GraphFormat { Json, Dot };

/// CSV: one point per row, D numeric columns, optional header row.
/// SWC: neuron morphology rows (id type x y z radius parent); only the
/// coordinates are used, row order preserved.
PointCloud read_cloud(const std::string& path, CloudFormat format);

/// CSV with full double precision (%.17g), so read_cloud round-trips
/// exactly.
void write_cloud(const PointCloud& cloud, const std::string& path);

/// JSON {"n_vertices": k, "edges": [[u, v], ...]} or DOT with loops as
/// self-edges.
void write_graph(const Pseudograph& g, const std::string& path, GraphFormat format);
Pseudograph read_pseudograph_json(const std::string& path);

/// Graph description file: dimension, vertices, parametric edges
/// (segment / polyline / arc) and the declared shape parameters.
void write_embedded_graph(const GraphWithParams& g, const std::string& path);
GraphWithParams read_embedded_graph(const std::string& path);

/// Experiment spec (JSON): generator (named or graph file), sigma, delta
/// policy, n values, trials, base seed.
ExperimentSpec read_experiment_spec(const std::string& path);

/// CSV columns: n, trials, failures, estimate, ci_low, ci_high, wall_ms.
void write_risk_csv(const std::vector<RiskEstimate>& results, const std::string& path);

/// Shortest round-trippable representation at 12 significant digits;
/// used for all derived numeric report output.
std::string format_g12(double v);

/// FeasibilityReport as a JSON object string (12 significant digits).
std::string feasibility_report_json(const FeasibilityReport& rep, double delta_used);

}  // namespace mgr
