#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mgr/experiments.hpp"
#include "mgr/geometry.hpp"
#include "mgr/params.hpp"
#include "mgr/pseudograph.hpp"
#include "mgr/reconstruct.hpp"
#include "mgr/rips.hpp"
#include "mgr/synth.hpp"

namespace py = pybind11;
using namespace mgr;

namespace {

LowerBoundKind kind_from_string(const std::string& s) {
    if (s == "shortest_edge") return LowerBoundKind::ShortestEdge;
    if (s == "angle") return LowerBoundKind::Angle;
    if (s == "global_reach") return LowerBoundKind::GlobalReach;
    if (s == "local_reach") return LowerBoundKind::LocalReach;
    throw std::invalid_argument("unknown lower-bound kind: " + s);
}

std::vector<std::vector<double>> cloud_to_list(const PointCloud& c) {
    std::vector<std::vector<double>> out;
    out.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c.point(i));
    return out;
}

std::string label_name(PointLabel l) {
    switch (l) {
        case PointLabel::EdgePoint: return "edge";
        case PointLabel::PreliminaryVertex: return "preliminary_vertex";
        case PointLabel::Vertex: return "vertex";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(_mgr, m) {
    m.doc() = "metric graph reconstruction: shell/Rips labeling, parameter "
              "calculus, synthetic generators and risk experiments";

    py::register_exception<InfeasibleError>(m, "InfeasibleError");

    py::class_<PointCloud>(m, "PointCloud")
        .def(py::init<const std::vector<Point>&>(), py::arg("points"))
        .def("__len__", &PointCloud::size)
        .def_property_readonly("dim", &PointCloud::dim)
        .def("point", &PointCloud::point, py::arg("i"))
        .def("to_list", &cloud_to_list);

    m.def("euclidean_dist",
          [](const Point& p, const Point& q) { return euclidean_dist(p, q); });
    m.def("ball_query",
          [](const PointCloud& c, const Point& p, double rad) { return ball_query(c, p, rad); });
    m.def("annulus_query", [](const PointCloud& c, const Point& p, double r, double delta) {
        return annulus_query(c, p, r, delta);
    });

    py::class_<ComponentLabeling>(m, "ComponentLabeling")
        .def_readonly("labels", &ComponentLabeling::labels)
        .def_readonly("count", &ComponentLabeling::count);
    m.def("rips_components",
          [](const PointCloud& c, double delta) { return rips_components(c, delta); });
    m.def("count_components",
          [](const PointCloud& c, double delta) { return count_components(c, delta); });

    py::class_<ShapeParams>(m, "ShapeParams")
        .def(py::init([](double b, double alpha, double tau, double xi, double sigma) {
                 ShapeParams p{b, alpha, tau, xi, sigma};
                 p.validate();
                 return p;
             }),
             py::arg("b"), py::arg("alpha"), py::arg("tau"), py::arg("xi"),
             py::arg("sigma") = 0.0)
        .def_readwrite("b", &ShapeParams::b)
        .def_readwrite("alpha", &ShapeParams::alpha)
        .def_readwrite("tau", &ShapeParams::tau)
        .def_readwrite("xi", &ShapeParams::xi)
        .def_readwrite("sigma", &ShapeParams::sigma)
        .def("sigma_limit", &ShapeParams::sigma_limit);

    py::class_<FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("alpha_prime", &FeasibilityReport::alpha_prime)
        .def_readonly("r", &FeasibilityReport::r)
        .def_readonly("p11", &FeasibilityReport::p11)
        .def_readonly("f", &FeasibilityReport::f_value)
        .def_readonly("cond9_ok", &FeasibilityReport::cond9_ok)
        .def_readonly("cond10_ok", &FeasibilityReport::cond10_ok)
        .def_readonly("cond15_ok", &FeasibilityReport::cond15_ok)
        .def_readonly("max_delta", &FeasibilityReport::max_delta);

    m.def("alpha_prime", &alpha_prime, py::arg("alpha"), py::arg("tau"), py::arg("sigma"));
    m.def("shell_inner_radius", &shell_inner_radius, py::arg("delta"), py::arg("params"));
    m.def("expansion_radius", &expansion_radius, py::arg("delta"), py::arg("params"));
    m.def("f_bound", &f_bound, py::arg("params"));
    m.def("check_reconstruction_conditions", &check_reconstruction_conditions,
          py::arg("delta"), py::arg("params"));
    m.def("tube_feasibility", &tube_feasibility, py::arg("params"));
    m.def("delta_noiseless", &delta_noiseless, py::arg("params"));
    m.def("delta_tubular", &delta_tubular, py::arg("params"), py::arg("c0"));
    m.def("sample_size_noiseless", &sample_size_noiseless, py::arg("graph_length"),
          py::arg("a"), py::arg("delta"), py::arg("lambda_"));
    m.def("sample_size_tubular", &sample_size_tubular, py::arg("graph_length"), py::arg("tau"),
          py::arg("sigma"), py::arg("delta"), py::arg("lambda_"), py::arg("c_prime_d") = 1.0);

    py::class_<Pseudograph>(m, "Pseudograph")
        .def(py::init<int>(), py::arg("n_vertices"))
        .def(py::init<int, std::vector<std::pair<int, int>>>(), py::arg("n_vertices"),
             py::arg("edges"))
        .def_property_readonly("n_vertices", &Pseudograph::n_vertices)
        .def_property_readonly("n_edges", &Pseudograph::n_edges)
        .def_property_readonly("n_loops", &Pseudograph::n_loops)
        .def("add_edge", &Pseudograph::add_edge)
        .def("edges", [](const Pseudograph& g) { return g.edges(); })
        .def("multiplicity", &Pseudograph::multiplicity)
        .def("__eq__", [](const Pseudograph& a, const Pseudograph& b) { return a == b; });
    m.def("degree_multiset", &degree_multiset);
    m.def("is_isomorphic", &is_isomorphic);

    py::class_<EmbeddedGraph>(m, "EmbeddedGraph")
        .def_property_readonly("dim", &EmbeddedGraph::dim)
        .def_property_readonly("total_length", &EmbeddedGraph::total_length)
        .def("topology", &EmbeddedGraph::topology)
        .def("point_at", &EmbeddedGraph::point_at, py::arg("edge"), py::arg("s"))
        .def("n_vertices", [](const EmbeddedGraph& g) { return g.vertices().size(); })
        .def("n_edges", [](const EmbeddedGraph& g) { return g.edges().size(); });

    py::class_<GraphWithParams>(m, "GraphWithParams")
        .def_readonly("graph", &GraphWithParams::graph)
        .def_readonly("params", &GraphWithParams::params);

    py::class_<TubeModel>(m, "TubeModel")
        .def(py::init<EmbeddedGraph, double>(), py::arg("graph"), py::arg("sigma") = 0.0)
        .def_readonly("graph", &TubeModel::graph)
        .def_readonly("sigma", &TubeModel::sigma);

    m.def("worst_case_graph", &worst_case_graph, py::arg("alpha"), py::arg("tau"),
          py::arg("dim") = 2);
    m.def("lower_bound_pair", [](const std::string& kind, double value) {
        return lower_bound_pair(kind_from_string(kind), value);
    });
    m.def("dist_to_graph",
          [](const EmbeddedGraph& g, const Point& p) { return dist_to_graph(g, p); });
    m.def("sample_noiseless", &sample_noiseless, py::arg("graph"), py::arg("n"),
          py::arg("seed"));
    m.def("sample_tube", &sample_tube, py::arg("model"), py::arg("n"), py::arg("seed"));
    m.def("grid_sample_dense", &grid_sample_dense, py::arg("model"), py::arg("spacing"));
    m.def("is_dense", &is_dense, py::arg("cloud"), py::arg("model"), py::arg("delta"));
    m.def("estimate_global_reach", &estimate_global_reach, py::arg("graph"),
          py::arg("threshold"), py::arg("resolution") = 0.0);

    py::class_<ReconstructionConfig>(m, "ReconstructionConfig")
        .def(py::init([](double r, double p11, double delta) {
                 return ReconstructionConfig{r, p11, delta};
             }),
             py::arg("r"), py::arg("p11"), py::arg("delta"))
        .def_readwrite("r", &ReconstructionConfig::r)
        .def_readwrite("p11", &ReconstructionConfig::p11)
        .def_readwrite("delta", &ReconstructionConfig::delta);

    py::class_<ReconstructionReport>(m, "ReconstructionReport")
        .def_property_readonly("labels",
                               [](const ReconstructionReport& r) {
                                   std::vector<std::string> out;
                                   out.reserve(r.labels.size());
                                   for (auto l : r.labels) out.push_back(label_name(l));
                                   return out;
                               })
        .def_readonly("local_degree", &ReconstructionReport::local_degree)
        .def_readonly("vertex_component", &ReconstructionReport::vertex_component)
        .def_readonly("edge_component", &ReconstructionReport::edge_component)
        .def_readonly("n_vertex_components", &ReconstructionReport::n_vertex_components)
        .def_readonly("n_edge_components", &ReconstructionReport::n_edge_components)
        .def_readonly("graph", &ReconstructionReport::graph)
        .def_property_readonly("n_diagnostics",
                               [](const ReconstructionReport& r) {
                                   return r.diagnostics.size();
                               })
        .def("flagged", &ReconstructionReport::flagged);

    m.def("local_degree", &local_degree, py::arg("cloud"), py::arg("y_index"), py::arg("r"),
          py::arg("delta"));
    m.def("reconstruct", &reconstruct, py::arg("cloud"), py::arg("config"));

    py::class_<RiskEstimate>(m, "RiskEstimate")
        .def_readonly("n", &RiskEstimate::n)
        .def_readonly("trials", &RiskEstimate::trials)
        .def_readonly("failures", &RiskEstimate::failures)
        .def_readonly("estimate", &RiskEstimate::estimate)
        .def_readonly("ci_low", &RiskEstimate::ci_low)
        .def_readonly("ci_high", &RiskEstimate::ci_high);

    m.def("wilson_interval", &wilson_interval, py::arg("failures"), py::arg("trials"));
    m.def("run_trial", &run_trial, py::arg("model"), py::arg("params"), py::arg("config"),
          py::arg("n"), py::arg("seed"));
    m.def(
        "estimate_risk",
        [](const TubeModel& model, const ShapeParams& params, const std::string& delta_mode,
           double delta_or_c0, const std::vector<std::size_t>& n_values, int trials,
           std::uint64_t base_seed) {
            DeltaPolicy policy;
            if (delta_mode == "explicit") {
                policy.mode = DeltaPolicy::Mode::Explicit;
                policy.delta = delta_or_c0;
            } else if (delta_mode == "noiseless") {
                policy.mode = DeltaPolicy::Mode::Noiseless;
            } else if (delta_mode == "tubular") {
                policy.mode = DeltaPolicy::Mode::Tubular;
                policy.c0 = delta_or_c0;
            } else {
                throw std::invalid_argument("delta_mode must be explicit|noiseless|tubular");
            }
            ExperimentSpec spec{model, params, policy, n_values, trials, base_seed};
            return estimate_risk(spec);
        },
        py::arg("model"), py::arg("params"), py::arg("delta_mode"), py::arg("delta_or_c0"),
        py::arg("n_values"), py::arg("trials"), py::arg("base_seed"));
}
