#include "mgr/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mgr/grid.hpp"

namespace mgr {
namespace {

double grid_cell_for(const PointCloud& cloud, double delta) {
    return delta / (2.0 * std::sqrt(static_cast<double>(cloud.dim())));
}

std::vector<int> degrees_batched(const PointCloud& cloud, const SpatialGrid& grid, double r,
                                 double delta) {
    const std::size_t n = cloud.size();
    std::vector<int> deg(n, 0);
    const long ncells = static_cast<long>(grid.cell_count());
    // Points sharing a cell share the candidate-cell window; compute it
    // once per cell.
#ifdef _OPENMP
#pragma omp parallel
    {
        SpatialGrid::ShellScratch scratch;
        std::vector<std::uint32_t> cand;
#pragma omp for schedule(dynamic, 16)
        for (long cell = 0; cell < ncells; ++cell) {
            grid.occupied_near_cell(cell, r + delta, cand);
            for (std::uint32_t i : grid.cell_points(cell))
                deg[i] = grid.shell_component_count(cloud[i], r, delta, delta, scratch, cand);
        }
    }
#else
    SpatialGrid::ShellScratch scratch;
    std::vector<std::uint32_t> cand;
    for (long cell = 0; cell < ncells; ++cell) {
        grid.occupied_near_cell(cell, r + delta, cand);
        for (std::uint32_t i : grid.cell_points(cell))
            deg[i] = grid.shell_component_count(cloud[i], r, delta, delta, scratch, cand);
    }
#endif
    return deg;
}

}  // namespace

int local_degree(const PointCloud& cloud, std::size_t y_index, double r, double delta) {
    if (y_index >= cloud.size()) throw std::invalid_argument("local_degree: index out of range");
    if (!(r > 0) || !(delta > 0))
        throw std::invalid_argument("local_degree: r and delta must be > 0");
    // Reference semantics: linear-scan shell + subset Rips components.
    auto shell = annulus_query(cloud, cloud[y_index], r, delta);
    std::vector<std::uint32_t> idx(shell.begin(), shell.end());
    return count_components(cloud, idx, delta);
}

std::vector<PointLabel> label_points(const PointCloud& cloud, double r, double delta) {
    if (!(r > 0) || !(delta > 0))
        throw std::invalid_argument("label_points: r and delta must be > 0");
    std::vector<PointLabel> labels(cloud.size());
    if (cloud.empty()) return labels;
    SpatialGrid grid(cloud, grid_cell_for(cloud, delta));
    const auto deg = degrees_batched(cloud, grid, r, delta);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        labels[i] = deg[i] == 2 ? PointLabel::EdgePoint : PointLabel::PreliminaryVertex;
    return labels;
}

std::vector<PointLabel> expand_vertices(const PointCloud& cloud,
                                        const std::vector<PointLabel>& labels, double p11) {
    if (labels.size() != cloud.size())
        throw std::invalid_argument("expand_vertices: label count mismatch");
    if (p11 < 0) throw std::invalid_argument("expand_vertices: p11 must be >= 0");
    std::vector<PointLabel> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[i] = labels[i] == PointLabel::PreliminaryVertex ? PointLabel::Vertex
                                                            : PointLabel::EdgePoint;
    if (cloud.empty()) return out;

    std::vector<std::size_t> prelim;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == PointLabel::PreliminaryVertex) prelim.push_back(i);
    if (prelim.empty() || p11 == 0.0) {
        // p11 = 0 still promotes coincident duplicates, matching the
        // closed-ball predicate.
        if (p11 == 0.0 && !prelim.empty()) {
            for (std::size_t i : prelim) {
                for (std::size_t j = 0; j < cloud.size(); ++j)
                    if (squared_dist(cloud[i], cloud[j]) == 0.0) out[j] = PointLabel::Vertex;
            }
        }
        return out;
    }

    SpatialGrid grid(cloud, p11 / std::sqrt(static_cast<double>(cloud.dim())));
    std::vector<std::uint32_t> hit;
    for (std::size_t i : prelim) {
        grid.ball_query(cloud[i], p11, hit);
        for (std::uint32_t j : hit) out[j] = PointLabel::Vertex;
    }
    return out;
}

AssembledGraph assemble_graph(const PointCloud& cloud,
                              const std::vector<PointLabel>& final_labels, double delta) {
    if (final_labels.size() != cloud.size())
        throw std::invalid_argument("assemble_graph: label count mismatch");
    if (!(delta > 0)) throw std::invalid_argument("assemble_graph: delta must be > 0");
    for (auto l : final_labels)
        if (l == PointLabel::PreliminaryVertex)
            throw std::invalid_argument("assemble_graph: preliminary vertex in final labels");

    const std::size_t n = cloud.size();
    AssembledGraph out;
    out.vertex_component.assign(n, -1);
    out.edge_component.assign(n, -1);
    if (n == 0) return out;

    std::vector<std::uint8_t> vmask(n, 0), emask(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        (final_labels[i] == PointLabel::Vertex ? vmask[i] : emask[i]) = 1;

    SpatialGrid grid(cloud, grid_cell_for(cloud, delta));
    out.vertex_components.count = grid.components(vmask, delta, out.vertex_component);
    out.edge_components.count = grid.components(emask, delta, out.edge_component);
    for (std::size_t i = 0; i < n; ++i) {
        if (!vmask[i]) out.vertex_component[i] = -1;
        if (!emask[i]) out.edge_component[i] = -1;
        if (vmask[i]) out.vertex_components.labels.push_back(out.vertex_component[i]);
        if (emask[i]) out.edge_components.labels.push_back(out.edge_component[i]);
    }

    // Step 17 linkage: strict < delta between edge and vertex points.
    const int ne = out.edge_components.count;
    std::vector<std::map<int, double>> touch(ne);  // edge comp -> {vertex comp: min d2}
    grid.for_label_pairs_within(emask, vmask, delta,
                                [&](std::uint32_t ei, std::uint32_t vj, double d2) {
                                    auto& m = touch[out.edge_component[ei]];
                                    auto [it, fresh] =
                                        m.emplace(out.vertex_component[vj], d2);
                                    if (!fresh && d2 < it->second) it->second = d2;
                                });

    // Component diameters, needed for the single-attachment loop rule.
    std::vector<std::vector<std::uint32_t>> epts(ne);
    for (std::size_t i = 0; i < n; ++i)
        if (emask[i]) epts[out.edge_component[i]].push_back(static_cast<std::uint32_t>(i));
    auto diameter_exceeds = [&](int j, double bound) {
        const auto& pts = epts[j];
        const std::size_t d = cloud.dim();
        Point lo(cloud[pts[0]].begin(), cloud[pts[0]].end());
        Point hi = lo;
        for (auto idx : pts) {
            auto p = cloud[idx];
            for (std::size_t k = 0; k < d; ++k) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        }
        double diag2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            if (hi[k] - lo[k] > bound) return true;
            diag2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
        }
        if (diag2 <= bound * bound) return false;
        const double b2 = bound * bound;
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
                if (squared_dist(cloud[pts[a]], cloud[pts[b]]) > b2) return true;
        return false;
    };

    out.graph = Pseudograph(out.vertex_components.count);
    for (int j = 0; j < ne; ++j) {
        const auto& m = touch[j];
        std::vector<int> touched;
        for (auto& [vc, d2] : m) touched.push_back(vc);
        if (m.size() == 2) {
            out.graph.add_edge(touched[0], touched[1]);
        } else if (m.size() == 1) {
            if (diameter_exceeds(j, delta))
                out.graph.add_edge(touched[0], touched[0]);
            else
                out.diagnostics.push_back({Diagnostic::Kind::TinyFragment, j, touched});
        } else if (m.empty()) {
            out.diagnostics.push_back({Diagnostic::Kind::DanglingEdgeComponent, j, {}});
        } else {
            // Keep the two nearest vertex components, flag the run.
            std::vector<std::pair<double, int>> by_dist;
            for (auto& [vc, d2] : m) by_dist.push_back({d2, vc});
            std::sort(by_dist.begin(), by_dist.end());
            out.graph.add_edge(by_dist[0].second, by_dist[1].second);
            out.diagnostics.push_back(
                {Diagnostic::Kind::OverAttachedEdgeComponent, j, touched});
        }
    }
    return out;
}

ReconstructionReport reconstruct(const PointCloud& cloud, const ReconstructionConfig& cfg) {
    if (cloud.empty()) throw std::invalid_argument("reconstruct: empty cloud");
    if (!(cfg.r > 0) || !(cfg.p11 > 0) || !(cfg.delta > 0))
        throw std::invalid_argument("reconstruct: r, p11, delta must all be > 0");

    ReconstructionReport rep;
    SpatialGrid grid(cloud, grid_cell_for(cloud, cfg.delta));
    rep.local_degree = degrees_batched(cloud, grid, cfg.r, cfg.delta);

    std::vector<PointLabel> prelim(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        prelim[i] = rep.local_degree[i] == 2 ? PointLabel::EdgePoint
                                             : PointLabel::PreliminaryVertex;
    rep.labels = expand_vertices(cloud, prelim, cfg.p11);

    auto assembled = assemble_graph(cloud, rep.labels, cfg.delta);
    rep.vertex_component = std::move(assembled.vertex_component);
    rep.edge_component = std::move(assembled.edge_component);
    rep.n_vertex_components = assembled.vertex_components.count;
    rep.n_edge_components = assembled.edge_components.count;
    rep.graph = std::move(assembled.graph);
    rep.diagnostics = std::move(assembled.diagnostics);
    return rep;
}

}  // namespace mgr
