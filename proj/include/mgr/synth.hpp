#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mgr/geometry.hpp"
#include "mgr/params.hpp"
#include "mgr/pseudograph.hpp"

namespace mgr {

struct Segment {
    Point a, b;
};

struct Polyline {
    std::vector<Point> pts;
};

/// Circular arc in the 2-plane spanned by the orthonormal pair (u, v)
/// through `center`: point(t) = center + radius (cos(start + t) u +
/// sin(start + t) v), t in [0, span]. span in (0, 2 pi].
struct Arc {
    Point center;
    double radius = 0.0;
    Point basis_u, basis_v;
    double angle_start = 0.0;
    double angle_span = 0.0;
};

using Curve = std::variant<Segment, Polyline, Arc>;

struct GraphEdge {
    int u = 0;
    int v = 0;
    Curve curve;
};

/// Ground-truth metric graph embedded in R^D: vertices plus parametric
/// edges whose endpoints coincide with their referenced vertices (within
/// 1e-9). Vertices of degree exactly 2 are rejected (a degree-2 node is
/// topologically invisible and would make reconstruction ill-posed).
/// Immutable after construction.
class EmbeddedGraph {
public:
    EmbeddedGraph(std::vector<Point> vertices, std::vector<GraphEdge> edges);

    std::size_t dim() const { return dim_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    double edge_length(std::size_t e) const { return lengths_[e]; }
    double total_length() const { return total_length_; }

    /// Point at arc length s in [0, edge_length(e)] along edge e.
    Point point_at(std::size_t e, double s) const;
    /// Unit tangent at arc length s (one-sided at polyline knots).
    Point tangent_at(std::size_t e, double s) const;

    Pseudograph topology() const;

    /// Same graph under an orthogonal map plus shift (rotates arc bases).
    EmbeddedGraph transformed(const std::vector<std::vector<double>>& rot,
                              const Point& shift) const;

private:
    std::vector<Point> vertices_;
    std::vector<GraphEdge> edges_;
    std::vector<double> lengths_;
    std::size_t dim_ = 0;
    double total_length_ = 0.0;
};

/// A graph together with the tube radius sigma of the noise model.
struct TubeModel {
    EmbeddedGraph graph;
    double sigma = 0.0;
};

struct GraphWithParams {
    EmbeddedGraph graph;
    ShapeParams params;
};

/// The hardest configuration for reconstruction: two radius-tau arcs
/// meeting at angle alpha at vertex x (arc centers subtend pi - alpha at
/// x), each of arc length alpha*tau, meeting again at x'. Two straight
/// spur edges of length alpha*tau along the symmetry axis at x and x'
/// raise both junctions to degree 3 (degree-2 nodes are rejected by the
/// graph type and invisible to any reconstruction). Embeds into R^dim by
/// zero-padding. Declared params: b = alpha*tau, xi = 2 tau (1-cos(alpha/2)).
GraphWithParams worst_case_graph(double alpha, double tau, std::size_t dim = 2);

enum class LowerBoundKind { ShortestEdge, Angle, GlobalReach, LocalReach };

/// The four pairs of graphs whose members are topologically distinct yet
/// nearly indistinguishable when the named parameter is small:
///   ShortestEdge(b):  segment of length 1+b  vs  segment 1 with an
///                     orthogonal mid-spur of length b.
///   Angle(a):         V of two length-2 edges at angle a with a tail of
///                     length 1+2sin(a/2)  vs  the same V with the tail cut
///                     to 1 and a chord 2sin(a/2) closing the triangle at
///                     unit distance from the apex.
///   GlobalReach(xi):  unit segment  vs  two half segments xi apart.
///   LocalReach(tau):  loop of radius tau on a unit edge  vs  a segment of
///                     length 1+2 pi tau.
std::pair<GraphWithParams, GraphWithParams> lower_bound_pair(LowerBoundKind kind,
                                                             double value);

/// Exact Euclidean distance from p to the graph (min over edges of
/// point-to-segment / point-to-arc distance).
double dist_to_graph(const EmbeddedGraph& g, std::span<const double> p);

/// n i.i.d. points uniform w.r.t. arc length; deterministic under seed.
PointCloud sample_noiseless(const EmbeddedGraph& g, std::size_t n, std::uint64_t seed);

/// n i.i.d. points uniform on the sigma-tube, by rejection from the
/// sigma-inflated bounding box. sigma = 0 delegates to sample_noiseless.
PointCloud sample_tube(const TubeModel& model, std::size_t n, std::uint64_t seed);

/// Deterministic sample guaranteed spacing/2-dense in the tube: points
/// along each curve at arc-length steps, normal-fiber lattices when
/// sigma > 0, and lattice caps on the vertex balls.
PointCloud grid_sample_dense(const TubeModel& model, double spacing);

/// Conservative delta/2-density check: every point of a deterministic
/// cover of the tube at resolution h = delta/10 must have a sample point
/// within delta/2 - h. May reject clouds within h of the boundary, never
/// accepts a non-dense one.
bool is_dense(const PointCloud& cloud, const TubeModel& model, double delta);

/// Numeric lower bound on the global reach: minimum Euclidean distance
/// over discretized point pairs at graph distance >= threshold, minus the
/// discretization margin. resolution = target spacing of the
/// discretization (defaults to total_length / 2000).
double estimate_global_reach(const EmbeddedGraph& g, double threshold,
                             double resolution = 0.0);

}  // namespace mgr
