#include "mgr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>
#include <numeric>

#include "mgr/grid.hpp"
#include "mgr/rng.hpp"

namespace mgr {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEndpointTol = 1e-9;

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Point sub(std::span<const double> a, std::span<const double> b) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Point axpy(const Point& base, double t, std::span<const double> dir) {
    Point out = base;
    for (std::size_t i = 0; i < dir.size(); ++i) out[i] += t * dir[i];
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double curve_length(const Curve& c) {
    if (const auto* s = std::get_if<Segment>(&c)) return euclidean_dist(s->a, s->b);
    if (const auto* p = std::get_if<Polyline>(&c)) {
        double total = 0.0;
        for (std::size_t i = 1; i < p->pts.size(); ++i)
            total += euclidean_dist(p->pts[i - 1], p->pts[i]);
        return total;
    }
    const auto& a = std::get<Arc>(c);
    return a.radius * a.angle_span;
}

Point arc_point(const Arc& a, double angle) {
    Point out = a.center;
    const double c = std::cos(angle), s = std::sin(angle);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += a.radius * (c * a.basis_u[i] + s * a.basis_v[i]);
    return out;
}

Point curve_point(const Curve& cv, double s, double len) {
    if (const auto* seg = std::get_if<Segment>(&cv)) {
        const double t = len > 0 ? s / len : 0.0;
        Point out(seg->a.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = seg->a[i] + t * (seg->b[i] - seg->a[i]);
        return out;
    }
    if (const auto* p = std::get_if<Polyline>(&cv)) {
        double acc = 0.0;
        for (std::size_t i = 1; i < p->pts.size(); ++i) {
            const double piece = euclidean_dist(p->pts[i - 1], p->pts[i]);
            if (s <= acc + piece || i + 1 == p->pts.size()) {
                const double t = piece > 0 ? std::clamp((s - acc) / piece, 0.0, 1.0) : 0.0;
                Point out(p->pts[i].size());
                for (std::size_t k = 0; k < out.size(); ++k)
                    out[k] = p->pts[i - 1][k] + t * (p->pts[i][k] - p->pts[i - 1][k]);
                return out;
            }
            acc += piece;
        }
        return p->pts.back();
    }
    const auto& a = std::get<Arc>(cv);
    return arc_point(a, a.angle_start + s / a.radius);
}

Point curve_tangent(const Curve& cv, double s, double len) {
    if (const auto* seg = std::get_if<Segment>(&cv)) {
        Point d = sub(seg->b, seg->a);
        const double n = norm(d);
        for (auto& x : d) x /= n;
        return d;
    }
    if (const auto* p = std::get_if<Polyline>(&cv)) {
        double acc = 0.0;
        for (std::size_t i = 1; i < p->pts.size(); ++i) {
            const double piece = euclidean_dist(p->pts[i - 1], p->pts[i]);
            if (s <= acc + piece || i + 1 == p->pts.size()) {
                Point d = sub(p->pts[i], p->pts[i - 1]);
                const double n = norm(d);
                for (auto& x : d) x /= n;
                return d;
            }
            acc += piece;
        }
    }
    const auto& a = std::get<Arc>(cv);
    const double angle = a.angle_start + s / a.radius;
    Point d(a.center.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = -std::sin(angle) * a.basis_u[i] + std::cos(angle) * a.basis_v[i];
    return d;
}

double point_segment_dist(std::span<const double> p, std::span<const double> a,
                          std::span<const double> b) {
    Point ab = sub(b, a), ap = sub(p, a);
    const double den = dot(ab, ab);
    const double t = den > 0 ? std::clamp(dot(ap, ab) / den, 0.0, 1.0) : 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double diff = p[i] - (a[i] + t * ab[i]);
        s += diff * diff;
    }
    return std::sqrt(s);
}

double point_arc_dist(std::span<const double> p, const Arc& a) {
    Point q = sub(p, a.center);
    const double x = dot(q, a.basis_u);
    const double y = dot(q, a.basis_v);
    const double rho2 = x * x + y * y;
    const double off2 = std::max(0.0, dot(q, q) - rho2);
    const double rho = std::sqrt(rho2);
    if (rho > 0.0) {
        double rel = std::fmod(std::atan2(y, x) - a.angle_start, 2.0 * kPi);
        if (rel < 0) rel += 2.0 * kPi;
        if (rel <= a.angle_span) {
            const double dr = rho - a.radius;
            return std::sqrt(off2 + dr * dr);
        }
    }
    const double d0 = euclidean_dist(p, arc_point(a, a.angle_start));
    const double d1 = euclidean_dist(p, arc_point(a, a.angle_start + a.angle_span));
    return std::min(d0, d1);
}

double point_curve_dist(std::span<const double> p, const Curve& cv) {
    if (const auto* seg = std::get_if<Segment>(&cv)) return point_segment_dist(p, seg->a, seg->b);
    if (const auto* pl = std::get_if<Polyline>(&cv)) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < pl->pts.size(); ++i)
            best = std::min(best, point_segment_dist(p, pl->pts[i - 1], pl->pts[i]));
        return best;
    }
    return point_arc_dist(p, std::get<Arc>(cv));
}

void check_dim(const Point& p, std::size_t dim, const char* what) {
    if (p.size() != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite");
}

}  // namespace

EmbeddedGraph::EmbeddedGraph(std::vector<Point> vertices, std::vector<GraphEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    if (vertices_.empty()) throw std::invalid_argument("EmbeddedGraph: no vertices");
    dim_ = vertices_.front().size();
    if (dim_ < 2) throw std::invalid_argument("EmbeddedGraph: dimension must be >= 2");
    for (const auto& v : vertices_) check_dim(v, dim_, "EmbeddedGraph vertex");

    std::vector<int> degree(vertices_.size(), 0);
    lengths_.reserve(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& ed = edges_[e];
        if (ed.u < 0 || ed.v < 0 || ed.u >= static_cast<int>(vertices_.size()) ||
            ed.v >= static_cast<int>(vertices_.size()))
            throw std::invalid_argument("EmbeddedGraph: edge endpoint out of range");
        if (const auto* seg = std::get_if<Segment>(&ed.curve)) {
            check_dim(seg->a, dim_, "Segment");
            check_dim(seg->b, dim_, "Segment");
        } else if (const auto* pl = std::get_if<Polyline>(&ed.curve)) {
            if (pl->pts.size() < 2) throw std::invalid_argument("Polyline: needs >= 2 points");
            for (const auto& p : pl->pts) check_dim(p, dim_, "Polyline");
        } else {
            const auto& a = std::get<Arc>(ed.curve);
            check_dim(a.center, dim_, "Arc center");
            check_dim(a.basis_u, dim_, "Arc basis");
            check_dim(a.basis_v, dim_, "Arc basis");
            if (!(a.radius > 0)) throw std::invalid_argument("Arc: radius must be > 0");
            if (!(a.angle_span > 0) || a.angle_span > 2 * kPi + kEndpointTol)
                throw std::invalid_argument("Arc: span must be in (0, 2 pi]");
            if (std::abs(norm(a.basis_u) - 1) > kEndpointTol ||
                std::abs(norm(a.basis_v) - 1) > kEndpointTol ||
                std::abs(dot(a.basis_u, a.basis_v)) > kEndpointTol)
                throw std::invalid_argument("Arc: basis not orthonormal");
        }
        const double len = curve_length(ed.curve);
        if (!(len > 0)) throw std::invalid_argument("EmbeddedGraph: zero-length edge");
        lengths_.push_back(len);
        total_length_ += len;
        if (euclidean_dist(curve_point(ed.curve, 0.0, len), vertices_[ed.u]) > kEndpointTol ||
            euclidean_dist(curve_point(ed.curve, len, len), vertices_[ed.v]) > kEndpointTol)
            throw std::invalid_argument("EmbeddedGraph: curve endpoints do not match vertices");
        degree[ed.u] += 1;
        degree[ed.v] += 1;
    }
    for (int d : degree)
        if (d == 2)
            throw std::invalid_argument(
                "EmbeddedGraph: degree-2 vertex (topologically invisible, not allowed)");
}

Point EmbeddedGraph::point_at(std::size_t e, double s) const {
    return curve_point(edges_[e].curve, std::clamp(s, 0.0, lengths_[e]), lengths_[e]);
}

Point EmbeddedGraph::tangent_at(std::size_t e, double s) const {
    return curve_tangent(edges_[e].curve, std::clamp(s, 0.0, lengths_[e]), lengths_[e]);
}

Pseudograph EmbeddedGraph::topology() const {
    Pseudograph g(static_cast<int>(vertices_.size()));
    for (const auto& e : edges_) g.add_edge(e.u, e.v);
    return g;
}

EmbeddedGraph EmbeddedGraph::transformed(const std::vector<std::vector<double>>& rot,
                                         const Point& shift) const {
    auto apply = [&](const Point& p, bool translate) {
        Point out(dim_, 0.0);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) out[i] += rot[i][j] * p[j];
            if (translate) out[i] += shift[i];
        }
        return out;
    };
    std::vector<Point> verts;
    verts.reserve(vertices_.size());
    for (const auto& v : vertices_) verts.push_back(apply(v, true));
    std::vector<GraphEdge> edges = edges_;
    for (auto& e : edges) {
        if (auto* seg = std::get_if<Segment>(&e.curve)) {
            seg->a = apply(seg->a, true);
            seg->b = apply(seg->b, true);
        } else if (auto* pl = std::get_if<Polyline>(&e.curve)) {
            for (auto& p : pl->pts) p = apply(p, true);
        } else {
            auto& a = std::get<Arc>(e.curve);
            a.center = apply(a.center, true);
            a.basis_u = apply(a.basis_u, false);
            a.basis_v = apply(a.basis_v, false);
        }
    }
    return EmbeddedGraph(std::move(verts), std::move(edges));
}

double dist_to_graph(const EmbeddedGraph& g, std::span<const double> p) {
    if (p.size() != g.dim()) throw std::invalid_argument("dist_to_graph: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : g.edges()) best = std::min(best, point_curve_dist(p, e.curve));
    if (g.edges().empty())
        for (const auto& v : g.vertices()) best = std::min(best, euclidean_dist(p, v));
    return best;
}

GraphWithParams worst_case_graph(double alpha, double tau, std::size_t dim) {
    if (!(alpha > 0) || !(alpha < kPi))
        throw std::invalid_argument("worst_case_graph: alpha must be in (0, pi)");
    if (!(tau > 0)) throw std::invalid_argument("worst_case_graph: tau must be > 0");
    if (dim < 2) throw std::invalid_argument("worst_case_graph: dim must be >= 2");

    const double c = std::cos(alpha / 2.0), s = std::sin(alpha / 2.0);
    const double len = alpha * tau;
    auto pad = [&](double x, double y) {
        Point p(dim, 0.0);
        p[0] = x;
        p[1] = y;
        return p;
    };
    const Point x = pad(0.0, 0.0);
    const Point xp = pad(0.0, -2.0 * tau * s);
    const Point t1 = pad(0.0, len);
    const Point t2 = pad(0.0, -2.0 * tau * s - len);
    const Point center_l = pad(-tau * c, -tau * s);
    const Point center_r = pad(tau * c, -tau * s);
    const Point ex = pad(1.0, 0.0), ey = pad(0.0, 1.0);

    std::vector<GraphEdge> edges;
    edges.push_back({1, 0, Arc{center_l, tau, ex, ey, -alpha / 2.0, alpha}});
    edges.push_back({0, 1, Arc{center_r, tau, ex, ey, kPi - alpha / 2.0, alpha}});
    edges.push_back({0, 2, Segment{x, t1}});
    edges.push_back({1, 3, Segment{xp, t2}});

    GraphWithParams out{EmbeddedGraph({x, xp, t1, t2}, std::move(edges)), {}};
    out.params.b = len;
    out.params.alpha = alpha;
    out.params.tau = tau;
    out.params.xi = 2.0 * tau * (1.0 - c);
    out.params.sigma = 0.0;
    return out;
}

namespace {

GraphWithParams make_graph(std::vector<Point> verts, std::vector<GraphEdge> edges, double b,
                           double alpha, double tau) {
    GraphWithParams g{EmbeddedGraph(std::move(verts), std::move(edges)), {}};
    g.params.b = b;
    g.params.alpha = alpha;
    g.params.tau = tau;
    g.params.sigma = 0.0;
    g.params.xi = std::max(
        1e-12, estimate_global_reach(g.graph, std::min(b, alpha * tau)));
    return g;
}

GraphEdge seg(int u, int v, Point a, Point b) { return {u, v, Segment{std::move(a), std::move(b)}}; }

}  // namespace

std::pair<GraphWithParams, GraphWithParams> lower_bound_pair(LowerBoundKind kind, double value) {
    if (!(value > 0)) throw std::invalid_argument("lower_bound_pair: parameter must be > 0");
    switch (kind) {
        case LowerBoundKind::ShortestEdge: {
            const double b = value;
            auto g1 = make_graph({{0, 0}, {1 + b, 0}}, {seg(0, 1, {0, 0}, {1 + b, 0})}, 1 + b,
                                 kPi, 10 * (1 + b));
            auto g2 = make_graph({{0, 0}, {1, 0}, {0.5, 0}, {0.5, b}},
                                 {seg(0, 2, {0, 0}, {0.5, 0}), seg(2, 1, {0.5, 0}, {1, 0}),
                                  seg(2, 3, {0.5, 0}, {0.5, b})},
                                 std::min(0.5, b), kPi / 2, 10 * (1 + b));
            return {std::move(g1), std::move(g2)};
        }
        case LowerBoundKind::Angle: {
            const double a = value;
            if (!(a < kPi)) throw std::invalid_argument("lower_bound_pair: angle must be < pi");
            const double c = std::cos(a / 2), s = std::sin(a / 2);
            const Point T1{2 * c, 2 * s}, T2{2 * c, -2 * s};
            const Point M1{c, s}, M2{c, -s};
            const double tail3 = 1 + 2 * s;
            auto g3 = make_graph(
                {{0, 0}, T1, T2, {-tail3, 0}},
                {seg(0, 1, {0, 0}, T1), seg(0, 2, {0, 0}, T2), seg(0, 3, {0, 0}, {-tail3, 0})},
                std::min(2.0, tail3), std::min(a, kPi - a / 2), 10 * (5 + 2 * s));
            auto g4 = make_graph({{0, 0}, M1, M2, T1, T2, {-1, 0}},
                                 {seg(0, 1, {0, 0}, M1), seg(1, 3, M1, T1), seg(0, 2, {0, 0}, M2),
                                  seg(2, 4, M2, T2), seg(1, 2, M1, M2), seg(0, 5, {0, 0}, {-1, 0})},
                                 std::min(1.0, 2 * s), std::min(a, (kPi - a) / 2),
                                 10 * (5 + 2 * s));
            return {std::move(g3), std::move(g4)};
        }
        case LowerBoundKind::GlobalReach: {
            const double xi = value;
            auto g5 = make_graph({{0, 0}, {1, 0}}, {seg(0, 1, {0, 0}, {1, 0})}, 1.0, kPi, 10.0);
            auto g6 = make_graph({{0, 0}, {0.5, 0}, {0.5 + xi, 0}, {1 + xi, 0}},
                                 {seg(0, 1, {0, 0}, {0.5, 0}),
                                  seg(2, 3, {0.5 + xi, 0}, {1 + xi, 0})},
                                 0.5, kPi, 10.0);
            return {std::move(g5), std::move(g6)};
        }
        case LowerBoundKind::LocalReach: {
            const double tau = value;
            const Point ex{1, 0}, ey{0, 1};
            std::vector<GraphEdge> e7;
            e7.push_back({0, 0, Arc{{0, tau}, tau, ex, ey, -kPi / 2, 2 * kPi}});
            e7.push_back(seg(0, 1, {0, 0}, {0, -1}));
            GraphWithParams g7{EmbeddedGraph({{0, 0}, {0, -1}}, std::move(e7)), {}};
            g7.params.b = std::min(1.0, 2 * kPi * tau);
            g7.params.alpha = kPi / 2;
            g7.params.tau = tau;
            g7.params.sigma = 0.0;
            g7.params.xi = std::max(
                1e-12, estimate_global_reach(g7.graph,
                                             std::min(g7.params.b, g7.params.alpha * tau)));
            const double l8 = 1 + 2 * kPi * tau;
            auto g8 = make_graph({{0, 0}, {l8, 0}}, {seg(0, 1, {0, 0}, {l8, 0})}, l8, kPi,
                                 10 * l8);
            return {std::move(g7), std::move(g8)};
        }
    }
    throw std::invalid_argument("lower_bound_pair: unknown kind");
}

PointCloud sample_noiseless(const EmbeddedGraph& g, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_noiseless: n must be > 0");
    if (!(g.total_length() > 0)) throw std::invalid_argument("sample_noiseless: zero-length graph");
    std::vector<double> cum;
    cum.reserve(g.edges().size());
    double acc = 0.0;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        acc += g.edge_length(e);
        cum.push_back(acc);
    }
    std::mt19937_64 rng(seed);
    std::vector<double> flat;
    flat.reserve(n * g.dim());
    for (std::size_t i = 0; i < n; ++i) {
        const double t = uniform01(rng) * acc;
        const std::size_t e =
            std::min<std::size_t>(std::lower_bound(cum.begin(), cum.end(), t) - cum.begin(),
                                  cum.size() - 1);
        const double prev = e == 0 ? 0.0 : cum[e - 1];
        Point p = g.point_at(e, t - prev);
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return PointCloud(std::move(flat), g.dim());
}

namespace {

std::pair<Point, Point> graph_bounding_box(const EmbeddedGraph& g) {
    const std::size_t d = g.dim();
    Point lo(d, std::numeric_limits<double>::infinity());
    Point hi(d, -std::numeric_limits<double>::infinity());
    auto absorb = [&](const Point& p) {
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    };
    for (const auto& v : g.vertices()) absorb(v);
    for (const auto& e : g.edges()) {
        if (const auto* seg = std::get_if<Segment>(&e.curve)) {
            absorb(seg->a);
            absorb(seg->b);
        } else if (const auto* pl = std::get_if<Polyline>(&e.curve)) {
            for (const auto& p : pl->pts) absorb(p);
        } else {
            const auto& a = std::get<Arc>(e.curve);
            absorb(arc_point(a, a.angle_start));
            absorb(arc_point(a, a.angle_start + a.angle_span));
            // axis extremes inside the angular span
            for (std::size_t i = 0; i < d; ++i) {
                const double base = std::atan2(a.basis_v[i], a.basis_u[i]);
                for (int k = 0; k < 2; ++k) {
                    double rel = std::fmod(base + k * kPi - a.angle_start, 2 * kPi);
                    if (rel < 0) rel += 2 * kPi;
                    if (rel <= a.angle_span) absorb(arc_point(a, a.angle_start + rel));
                }
            }
        }
    }
    return {lo, hi};
}

}  // namespace

PointCloud sample_tube(const TubeModel& model, std::size_t n, std::uint64_t seed) {
    if (model.sigma < 0) throw std::invalid_argument("sample_tube: sigma must be >= 0");
    if (model.sigma == 0.0) return sample_noiseless(model.graph, n, seed);
    if (n == 0) throw std::invalid_argument("sample_tube: n must be > 0");
    auto [lo, hi] = graph_bounding_box(model.graph);
    const std::size_t d = model.graph.dim();
    for (std::size_t i = 0; i < d; ++i) {
        lo[i] -= model.sigma;
        hi[i] += model.sigma;
    }
    std::mt19937_64 rng(seed);
    std::vector<double> flat;
    flat.reserve(n * d);
    Point candidate(d);
    std::size_t accepted = 0;
    const std::size_t max_tries = std::max<std::size_t>(100000000, 100000 * n);
    for (std::size_t tries = 0; accepted < n; ++tries) {
        if (tries >= max_tries) throw std::runtime_error("sample_tube: acceptance rate too low");
        for (std::size_t i = 0; i < d; ++i)
            candidate[i] = lo[i] + uniform01(rng) * (hi[i] - lo[i]);
        if (dist_to_graph(model.graph, candidate) <= model.sigma) {
            flat.insert(flat.end(), candidate.begin(), candidate.end());
            ++accepted;
        }
    }
    return PointCloud(std::move(flat), d);
}

namespace {

// Orthonormal basis of the orthogonal complement of unit vector t.
std::vector<Point> normal_basis(const Point& t) {
    const std::size_t d = t.size();
    std::vector<Point> basis;
    for (std::size_t axis = 0; axis < d && basis.size() + 1 < d + 1; ++axis) {
        Point v(d, 0.0);
        v[axis] = 1.0;
        double pt = dot(v, t);
        for (std::size_t i = 0; i < d; ++i) v[i] -= pt * t[i];
        for (const auto& b : basis) {
            const double pb = dot(v, b);
            for (std::size_t i = 0; i < d; ++i) v[i] -= pb * b[i];
        }
        const double nv = norm(v);
        if (nv > 1e-8) {
            for (auto& x : v) x /= nv;
            basis.push_back(std::move(v));
        }
        if (basis.size() == d - 1) break;
    }
    return basis;
}

// Lattice points of pitch*Z^k with norm <= radius, emitted via callback.
template <typename Fn>
void ball_lattice(std::size_t k, double pitch, double radius, Fn&& fn) {
    const int jmax = static_cast<int>(std::floor(radius / pitch));
    std::vector<int> idx(k, -jmax);
    std::vector<double> w(k);
    while (true) {
        double n2 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = idx[i] * pitch;
            n2 += w[i] * w[i];
        }
        if (n2 <= radius * radius) fn(w);
        std::size_t i = k;
        bool done = (k == 0);
        while (i > 0) {
            --i;
            if (++idx[i] <= jmax) break;
            idx[i] = -jmax;
            if (i == 0) done = true;
        }
        if (done) break;
        if (k == 0) break;
    }
}

double curvature_bound(const Curve& c) {
    if (const auto* a = std::get_if<Arc>(&c)) return 1.0 / a->radius;
    return 0.0;
}

}  // namespace

PointCloud grid_sample_dense(const TubeModel& model, double spacing) {
    if (!(spacing > 0)) throw std::invalid_argument("grid_sample_dense: spacing must be > 0");
    const auto& g = model.graph;
    const double sigma = model.sigma;
    const std::size_t d = g.dim();
    std::vector<double> flat;

    auto emit = [&](const Point& p) { flat.insert(flat.end(), p.begin(), p.end()); };

    if (sigma == 0.0) {
        for (std::size_t e = 0; e < g.edges().size(); ++e) {
            const double len = g.edge_length(e);
            const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                               std::ceil(len / spacing)));
            for (std::size_t k = 0; k <= m; ++k) emit(g.point_at(e, len * k / m));
        }
        return PointCloud(std::move(flat), d);
    }

    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const double len = g.edge_length(e);
        const double kappa = curvature_bound(g.edges()[e].curve);
        const double s1 = spacing / (4.0 * (1.0 + sigma * kappa));
        const double pitch = spacing / (4.0 * std::sqrt(std::max<std::size_t>(1, d - 1)));
        const std::size_t m =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / s1)));
        for (std::size_t k = 0; k <= m; ++k) {
            const double s = len * k / m;
            const Point c = g.point_at(e, s);
            const Point t = g.tangent_at(e, s);
            const auto basis = normal_basis(t);
            ball_lattice(basis.size(), pitch, sigma, [&](const std::vector<double>& w) {
                Point p = c;
                for (std::size_t i = 0; i < basis.size(); ++i)
                    for (std::size_t q = 0; q < d; ++q) p[q] += w[i] * basis[i][q];
                emit(p);
            });
        }
    }

    // Caps on vertex balls and polyline knots.
    const double cap_pitch = spacing / (4.0 * std::sqrt(static_cast<double>(d)));
    std::vector<Point> cap_centers = g.vertices();
    for (const auto& e : g.edges())
        if (const auto* pl = std::get_if<Polyline>(&e.curve))
            for (std::size_t i = 1; i + 1 < pl->pts.size(); ++i) cap_centers.push_back(pl->pts[i]);
    for (const auto& v : cap_centers) {
        ball_lattice(d, cap_pitch, sigma, [&](const std::vector<double>& w) {
            Point p = v;
            for (std::size_t q = 0; q < d; ++q) p[q] += w[q];
            emit(p);
        });
    }
    return PointCloud(std::move(flat), d);
}

bool is_dense(const PointCloud& cloud, const TubeModel& model, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("is_dense: delta must be > 0");
    if (cloud.empty()) return false;
    if (cloud.dim() != model.graph.dim())
        throw std::invalid_argument("is_dense: dimension mismatch");
    const double h = delta / 10.0;
    const double reach_needed = delta / 2.0 - h;
    if (!(reach_needed > 0)) return false;
    const PointCloud cover = grid_sample_dense(model, 2.0 * h);
    const double cell = reach_needed / std::sqrt(static_cast<double>(cloud.dim()));
    SpatialGrid grid(cloud, cell);
    std::vector<std::uint32_t> hits;
    for (std::size_t i = 0; i < cover.size(); ++i) {
        grid.ball_query(cover[i], reach_needed, hits);
        if (hits.empty()) return false;
    }
    return true;
}

double estimate_global_reach(const EmbeddedGraph& g, double threshold, double resolution) {
    const double L = g.total_length();
    if (!(L > 0)) throw std::invalid_argument("estimate_global_reach: zero-length graph");
    const double h = resolution > 0 ? resolution : L / 2000.0;

    // Vertex-to-vertex shortest paths over edge lengths.
    const std::size_t nv = g.vertices().size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dv(nv, std::vector<double>(nv, kInf));
    for (std::size_t i = 0; i < nv; ++i) dv[i][i] = 0.0;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const int u = g.edges()[e].u, v = g.edges()[e].v;
        dv[u][v] = std::min(dv[u][v], g.edge_length(e));
        dv[v][u] = dv[u][v];
    }
    for (std::size_t k = 0; k < nv; ++k)
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = 0; j < nv; ++j)
                dv[i][j] = std::min(dv[i][j], dv[i][k] + dv[k][j]);

    struct Sample {
        std::size_t edge;
        double s;
        Point p;
    };
    std::vector<Sample> samples;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const double len = g.edge_length(e);
        const std::size_t m =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h)));
        for (std::size_t k = 0; k <= m; ++k) {
            const double s = len * k / m;
            samples.push_back({e, s, g.point_at(e, s)});
        }
    }

    double best = kInf;
    const double include_below = threshold - 2.0 * h;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& a = samples[i];
        const int ua = g.edges()[a.edge].u, va = g.edges()[a.edge].v;
        const double la = g.edge_length(a.edge);
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const auto& b = samples[j];
            const int ub = g.edges()[b.edge].u, vb = g.edges()[b.edge].v;
            const double lb = g.edge_length(b.edge);
            double dg = std::min({a.s + dv[ua][ub] + b.s, a.s + dv[ua][vb] + (lb - b.s),
                                  (la - a.s) + dv[va][ub] + b.s,
                                  (la - a.s) + dv[va][vb] + (lb - b.s)});
            if (a.edge == b.edge) dg = std::min(dg, std::abs(a.s - b.s));
            if (dg >= include_below) best = std::min(best, euclidean_dist(a.p, b.p));
        }
    }
    if (!std::isfinite(best)) return 0.0;
    return std::max(0.0, best - 2.0 * h);
}

}  // namespace mgr
