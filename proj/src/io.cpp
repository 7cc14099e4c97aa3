#include "mgr/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mgr {
namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

Point json_point(const json& j, std::size_t dim, const char* what) {
    if (!j.is_array() || (dim > 0 && j.size() != dim))
        throw IoError(std::string(what) + ": bad coordinate array");
    Point p;
    for (const auto& v : j) p.push_back(v.get<double>());
    return p;
}

json point_json(const Point& p) {
    json j = json::array();
    for (double v : p) j.push_back(v);
    return j;
}

}  // namespace

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

PointCloud read_cloud(const std::string& path, CloudFormat format) {
    auto in = open_in(path);
    std::vector<double> flat;
    std::size_t dim = 0, row = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (format == CloudFormat::Swc && line[line.find_first_not_of(" \t")] == '#') continue;

        std::vector<double> vals;
        if (format == CloudFormat::Csv) {
            auto toks = split_csv(line);
            bool all_numeric = true;
            std::vector<double> parsed;
            for (const auto& t : toks) {
                double v;
                if (!parse_double(t, v)) {
                    all_numeric = false;
                    break;
                }
                parsed.push_back(v);
            }
            if (!all_numeric) {
                if (row == 0) continue;  // header row
                throw IoError(path + ":" + std::to_string(lineno) + ": non-numeric value");
            }
            vals = std::move(parsed);
        } else {
            std::istringstream ss(line);
            std::vector<std::string> toks;
            std::string t;
            while (ss >> t) toks.push_back(t);
            if (toks.size() < 7)
                throw IoError(path + ":" + std::to_string(lineno) +
                              ": SWC row needs 7 fields (id type x y z radius parent)");
            for (int k = 2; k <= 4; ++k) {
                double v;
                if (!parse_double(toks[k], v))
                    throw IoError(path + ":" + std::to_string(lineno) + ": bad SWC coordinate");
                vals.push_back(v);
            }
        }
        if (vals.size() < 2)
            throw IoError(path + ":" + std::to_string(lineno) + ": need at least 2 columns");
        if (dim == 0)
            dim = vals.size();
        else if (vals.size() != dim)
            throw IoError(path + ":" + std::to_string(lineno) + ": inconsistent dimension (got " +
                          std::to_string(vals.size()) + ", expected " + std::to_string(dim) + ")");
        for (double v : vals) {
            if (!std::isfinite(v))
                throw IoError(path + ":" + std::to_string(lineno) + ": non-finite value");
            flat.push_back(v);
        }
        ++row;
    }
    if (row == 0) throw IoError(path + ": no points");
    return PointCloud(std::move(flat), dim);
}

void write_cloud(const PointCloud& cloud, const std::string& path) {
    auto out = open_out(path);
    char buf[64];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (std::size_t d = 0; d < p.size(); ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", p[d]);
            out << (d ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out.good()) throw IoError("write failed: " + path);
}

void write_graph(const Pseudograph& g, const std::string& path, GraphFormat format) {
    auto out = open_out(path);
    if (format == GraphFormat::Json) {
        json j;
        j["n_vertices"] = g.n_vertices();
        j["edges"] = json::array();
        for (auto& [u, v] : g.edges()) j["edges"].push_back({u, v});
        out << j.dump(2) << "\n";
    } else {
        out << "graph G {\n";
        for (int v = 0; v < g.n_vertices(); ++v) out << "  " << v << ";\n";
        for (auto& [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
        out << "}\n";
    }
    if (!out.good()) throw IoError("write failed: " + path);
}

Pseudograph read_pseudograph_json(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    try {
        Pseudograph g(j.at("n_vertices").get<int>());
        for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
        return g;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

namespace {

json params_json(const ShapeParams& p) {
    return {{"b", p.b}, {"alpha", p.alpha}, {"tau", p.tau}, {"xi", p.xi}, {"sigma", p.sigma}};
}

ShapeParams params_from_json(const json& j) {
    ShapeParams p;
    p.b = j.at("b").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.tau = j.at("tau").get<double>();
    p.xi = j.at("xi").get<double>();
    p.sigma = j.value("sigma", 0.0);
    return p;
}

}  // namespace

void write_embedded_graph(const GraphWithParams& g, const std::string& path) {
    json j;
    j["dim"] = g.graph.dim();
    j["shape_params"] = params_json(g.params);
    j["vertices"] = json::array();
    for (const auto& v : g.graph.vertices()) j["vertices"].push_back(point_json(v));
    j["edges"] = json::array();
    for (const auto& e : g.graph.edges()) {
        json je;
        je["u"] = e.u;
        je["v"] = e.v;
        if (const auto* s = std::get_if<Segment>(&e.curve)) {
            je["type"] = "segment";
            je["a"] = point_json(s->a);
            je["b"] = point_json(s->b);
        } else if (const auto* p = std::get_if<Polyline>(&e.curve)) {
            je["type"] = "polyline";
            je["points"] = json::array();
            for (const auto& q : p->pts) je["points"].push_back(point_json(q));
        } else {
            const auto& a = std::get<Arc>(e.curve);
            je["type"] = "arc";
            je["center"] = point_json(a.center);
            je["radius"] = a.radius;
            je["basis_u"] = point_json(a.basis_u);
            je["basis_v"] = point_json(a.basis_v);
            je["angle_start"] = a.angle_start;
            je["angle_span"] = a.angle_span;
        }
        j["edges"].push_back(je);
    }
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    if (!out.good()) throw IoError("write failed: " + path);
}

GraphWithParams read_embedded_graph(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    try {
        const std::size_t dim = j.at("dim").get<std::size_t>();
        std::vector<Point> verts;
        for (const auto& v : j.at("vertices")) verts.push_back(json_point(v, dim, "vertex"));
        std::vector<GraphEdge> edges;
        for (const auto& je : j.at("edges")) {
            GraphEdge e;
            e.u = je.at("u").get<int>();
            e.v = je.at("v").get<int>();
            const std::string type = je.at("type").get<std::string>();
            if (type == "segment") {
                e.curve = Segment{json_point(je.at("a"), dim, "segment"),
                                  json_point(je.at("b"), dim, "segment")};
            } else if (type == "polyline") {
                Polyline p;
                for (const auto& q : je.at("points"))
                    p.pts.push_back(json_point(q, dim, "polyline"));
                e.curve = std::move(p);
            } else if (type == "arc") {
                Arc a;
                a.center = json_point(je.at("center"), dim, "arc");
                a.radius = je.at("radius").get<double>();
                a.basis_u = json_point(je.at("basis_u"), dim, "arc");
                a.basis_v = json_point(je.at("basis_v"), dim, "arc");
                a.angle_start = je.at("angle_start").get<double>();
                a.angle_span = je.at("angle_span").get<double>();
                e.curve = std::move(a);
            } else {
                throw IoError(path + ": unknown edge type '" + type + "'");
            }
            edges.push_back(std::move(e));
        }
        GraphWithParams out{EmbeddedGraph(std::move(verts), std::move(edges)), {}};
        if (j.contains("shape_params")) out.params = params_from_json(j["shape_params"]);
        return out;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

ExperimentSpec read_experiment_spec(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    try {
        GraphWithParams gen = [&]() -> GraphWithParams {
            const auto& g = j.at("generator");
            if (g.contains("file")) return read_embedded_graph(g["file"].get<std::string>());
            const std::string kind = g.at("kind").get<std::string>();
            if (kind == "worst_case")
                return worst_case_graph(g.at("alpha").get<double>(), g.at("tau").get<double>(),
                                        g.value("dim", std::size_t{2}));
            const double value = g.at("value").get<double>();
            auto pick = [&](LowerBoundKind k, bool second) {
                auto pair = lower_bound_pair(k, value);
                return second ? std::move(pair.second) : std::move(pair.first);
            };
            if (kind == "g1") return pick(LowerBoundKind::ShortestEdge, false);
            if (kind == "g2") return pick(LowerBoundKind::ShortestEdge, true);
            if (kind == "g3") return pick(LowerBoundKind::Angle, false);
            if (kind == "g4") return pick(LowerBoundKind::Angle, true);
            if (kind == "g5") return pick(LowerBoundKind::GlobalReach, false);
            if (kind == "g6") return pick(LowerBoundKind::GlobalReach, true);
            if (kind == "g7") return pick(LowerBoundKind::LocalReach, false);
            if (kind == "g8") return pick(LowerBoundKind::LocalReach, true);
            throw IoError(path + ": unknown generator kind '" + kind + "'");
        }();

        ExperimentSpec spec{TubeModel{std::move(gen.graph), j.value("sigma", 0.0)},
                            gen.params,
                            {},
                            {},
                            j.at("trials").get<int>(),
                            j.value("base_seed", std::uint64_t{0})};
        if (j.contains("shape_params")) spec.params = params_from_json(j["shape_params"]);
        spec.params.sigma = spec.model.sigma;

        const auto& dp = j.at("delta");
        const std::string mode = dp.at("mode").get<std::string>();
        if (mode == "explicit") {
            spec.policy.mode = DeltaPolicy::Mode::Explicit;
            spec.policy.delta = dp.at("value").get<double>();
        } else if (mode == "noiseless") {
            spec.policy.mode = DeltaPolicy::Mode::Noiseless;
        } else if (mode == "tubular") {
            spec.policy.mode = DeltaPolicy::Mode::Tubular;
            spec.policy.c0 = dp.value("c0", 0.9);
        } else {
            throw IoError(path + ": unknown delta mode '" + mode + "'");
        }
        for (const auto& n : j.at("n_values")) spec.n_values.push_back(n.get<std::size_t>());
        return spec;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_risk_csv(const std::vector<RiskEstimate>& results, const std::string& path) {
    auto out = open_out(path);
    out << "n,trials,failures,estimate,ci_low,ci_high,wall_ms\n";
    for (const auto& r : results) {
        out << r.n << "," << r.trials << "," << r.failures << "," << format_g12(r.estimate)
            << "," << format_g12(r.ci_low) << "," << format_g12(r.ci_high) << ","
            << format_g12(r.wall_ms) << "\n";
    }
    if (!out.good()) throw IoError("write failed: " + path);
}

std::string feasibility_report_json(const FeasibilityReport& rep, double delta_used) {
    json j;
    j["delta"] = json::parse(format_g12(delta_used));
    j["alpha_prime"] = json::parse(format_g12(rep.alpha_prime));
    j["r"] = json::parse(format_g12(rep.r));
    j["p11"] = json::parse(format_g12(rep.p11));
    j["f"] = json::parse(format_g12(rep.f_value));
    j["max_delta"] = json::parse(format_g12(rep.max_delta));
    j["cond9_ok"] = rep.cond9_ok;
    j["cond10_ok"] = rep.cond10_ok;
    j["cond15_ok"] = rep.cond15_ok;
    return j.dump(2);
}

}  // namespace mgr
