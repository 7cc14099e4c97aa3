#pragma once

#include <cstdint>
#include <vector>

#include "mgr/geometry.hpp"
#include "mgr/pseudograph.hpp"
#include "mgr/rips.hpp"

namespace mgr {

enum class PointLabel : std::uint8_t { EdgePoint, PreliminaryVertex, Vertex };

/// Tuning parameters of the reconstruction: shell inner radius r, vertex
/// expansion radius p11, Rips scale delta. Normally produced by the
/// params module (shell_inner_radius / expansion_radius) but may be
/// overridden.
struct ReconstructionConfig {
    double r = 0.0;
    double p11 = 0.0;
    double delta = 0.0;
};

struct Diagnostic {
    enum class Kind {
        DanglingEdgeComponent,     // touches no vertex component
        TinyFragment,              // touches one, diameter <= delta: dropped
        OverAttachedEdgeComponent  // touches three or more
    };
    Kind kind;
    int edge_component = -1;
    std::vector<int> touched;  // vertex components at strict distance < delta
};

struct ReconstructionReport {
    std::vector<PointLabel> labels;
    std::vector<int> local_degree;
    std::vector<std::int32_t> vertex_component;  // -1 for non-vertex points
    std::vector<std::int32_t> edge_component;    // -1 for non-edge points
    int n_vertex_components = 0;
    int n_edge_components = 0;
    Pseudograph graph;
    std::vector<Diagnostic> diagnostics;

    /// Diagnostics present: the run is counted as a failure by the risk
    /// experiments even if the graph happens to be isomorphic.
    bool flagged() const { return !diagnostics.empty(); }
};

/// Number of Rips components (scale delta) of the shell
/// B(y, r+delta) \ B(y, r); 0 if the shell is empty.
int local_degree(const PointCloud& cloud, std::size_t y_index, double r, double delta);

/// EdgePoint iff local degree == 2, else PreliminaryVertex.
std::vector<PointLabel> label_points(const PointCloud& cloud, double r, double delta);

/// Every point within <= p11 of any PreliminaryVertex becomes Vertex
/// (including the preliminary vertices themselves); the rest keep
/// EdgePoint. p11 >= 0.
std::vector<PointLabel> expand_vertices(const PointCloud& cloud,
                                        const std::vector<PointLabel>& labels, double p11);

struct AssembledGraph {
    ComponentLabeling vertex_components;  // over vertex-labeled points
    ComponentLabeling edge_components;    // over edge-labeled points
    std::vector<std::int32_t> vertex_component;  // per point, -1 if not vertex
    std::vector<std::int32_t> edge_component;    // per point, -1 if not edge
    Pseudograph graph;
    std::vector<Diagnostic> diagnostics;
};

/// Steps 15-17: vertices of the output are the Rips components of the
/// vertex points; an edge component is attached to the vertex components
/// holding a point at strict distance < delta from it. Two attachments
/// make an edge, one makes a loop when the component spans more than
/// delta, anything else is a diagnostic.
AssembledGraph assemble_graph(const PointCloud& cloud,
                              const std::vector<PointLabel>& final_labels, double delta);

/// Full pipeline: label, expand, assemble. Deterministic for fixed input.
ReconstructionReport reconstruct(const PointCloud& cloud, const ReconstructionConfig& cfg);

}  // namespace mgr
