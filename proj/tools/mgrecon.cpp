// mgrecon: metric graph reconstruction toolkit.
//
// Subcommands: params, synth, sample, reconstruct, risk.
// Exit codes: 0 success, 1 infeasible/invalid parameters, 2 IO or usage errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mgr/experiments.hpp"
#include "mgr/io.hpp"
#include "mgr/params.hpp"
#include "mgr/reconstruct.hpp"
#include "mgr/synth.hpp"

namespace {

struct ParamFlags {
    double b = 0, alpha = 0, tau = 0, xi = 0, sigma = 0;
    mgr::ShapeParams to_params() const { return {b, alpha, tau, xi, sigma}; }
    void attach(CLI::App* cmd, bool required) {
        auto* ob = cmd->add_option("--b", b, "shortest edge length");
        auto* oa = cmd->add_option("--alpha", alpha, "smallest angle (radians)");
        auto* ot = cmd->add_option("--tau", tau, "local reach");
        auto* ox = cmd->add_option("--xi", xi, "global reach");
        cmd->add_option("--sigma", sigma, "tube radius (default 0)");
        if (required) {
            ob->required();
            oa->required();
            ot->required();
            ox->required();
        }
    }
};

int run_params(const ParamFlags& flags, double delta, bool have_delta) {
    const mgr::ShapeParams p = flags.to_params();
    mgr::FeasibilityReport rep = mgr::check_reconstruction_conditions(
        have_delta ? delta : 0.0, p);
    double used = delta;
    if (!have_delta) {
        used = rep.max_delta;
        if (used > 0) rep = mgr::check_reconstruction_conditions(used, p);
    }
    std::cout << mgr::feasibility_report_json(rep, used) << "\n";
    if (have_delta && !(rep.cond9_ok && rep.cond10_ok)) return 1;
    if (!have_delta && !(rep.max_delta > 0)) return 1;
    return 0;
}

mgr::GraphWithParams make_generator(const std::string& kind, double alpha, double tau,
                                    double value, std::size_t dim) {
    if (kind == "worst_case") return mgr::worst_case_graph(alpha, tau, dim);
    auto pick = [&](mgr::LowerBoundKind k, bool second) {
        auto pair = mgr::lower_bound_pair(k, value);
        return second ? std::move(pair.second) : std::move(pair.first);
    };
    if (kind == "g1") return pick(mgr::LowerBoundKind::ShortestEdge, false);
    if (kind == "g2") return pick(mgr::LowerBoundKind::ShortestEdge, true);
    if (kind == "g3") return pick(mgr::LowerBoundKind::Angle, false);
    if (kind == "g4") return pick(mgr::LowerBoundKind::Angle, true);
    if (kind == "g5") return pick(mgr::LowerBoundKind::GlobalReach, false);
    if (kind == "g6") return pick(mgr::LowerBoundKind::GlobalReach, true);
    if (kind == "g7") return pick(mgr::LowerBoundKind::LocalReach, false);
    if (kind == "g8") return pick(mgr::LowerBoundKind::LocalReach, true);
    throw CLI::ValidationError("--kind", "unknown generator '" + kind + "'");
}

void write_labels_csv(const mgr::PointCloud& cloud, const mgr::ReconstructionReport& rep,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mgr::IoError("cannot write " + path);
    const std::size_t d = cloud.dim();
    for (std::size_t k = 0; k < d; ++k) out << "x" << k << ",";
    out << "label,local_degree,vertex_component,edge_component\n";
    char buf[64];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (std::size_t k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", p[k]);
            out << buf << ",";
        }
        out << (rep.labels[i] == mgr::PointLabel::Vertex ? "vertex" : "edge") << ","
            << rep.local_degree[i] << "," << rep.vertex_component[i] << ","
            << rep.edge_component[i] << "\n";
    }
    if (!out.good()) throw mgr::IoError("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric graph reconstruction toolkit"};
    app.require_subcommand(1);

    // params
    auto* cmd_params = app.add_subcommand("params", "feasibility report for shape parameters");
    ParamFlags pf;
    pf.attach(cmd_params, true);
    double params_delta = 0;
    auto* opt_delta = cmd_params->add_option("--delta", params_delta, "evaluate at this delta");

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "emit a named generator as a graph file");
    std::string synth_kind, synth_out;
    double synth_alpha = 0, synth_tau = 0, synth_value = 0;
    std::size_t synth_dim = 2;
    cmd_synth->add_option("--kind", synth_kind, "worst_case | g1..g8")->required();
    cmd_synth->add_option("--alpha", synth_alpha, "worst_case: angle (radians)");
    cmd_synth->add_option("--tau", synth_tau, "worst_case: reach");
    cmd_synth->add_option("--value", synth_value, "g1..g8: the pair's parameter");
    cmd_synth->add_option("--dim", synth_dim, "ambient dimension (default 2)");
    cmd_synth->add_option("-o,--output", synth_out, "output graph JSON")->required();

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "sample a point cloud from a graph file");
    std::string sample_graph, sample_out;
    std::size_t sample_n = 0;
    double sample_sigma = 0, sample_spacing = 0;
    std::uint64_t sample_seed = 0;
    bool sample_grid = false;
    cmd_sample->add_option("graph", sample_graph, "graph JSON file")->required();
    cmd_sample->add_option("--n", sample_n, "number of random points");
    cmd_sample->add_option("--sigma", sample_sigma, "tube radius (default 0)");
    cmd_sample->add_option("--seed", sample_seed, "RNG seed (default 0)");
    cmd_sample->add_flag("--grid", sample_grid, "deterministic dense sample");
    cmd_sample->add_option("--spacing", sample_spacing, "grid spacing (with --grid)");
    cmd_sample->add_option("-o,--output", sample_out, "output cloud CSV")->required();

    // reconstruct
    auto* cmd_rec = app.add_subcommand("reconstruct", "reconstruct a graph from a cloud");
    std::string rec_cloud, rec_out, rec_dot, rec_labels, rec_format = "csv";
    double rec_r = 0, rec_p11 = 0, rec_delta = 0, rec_c0 = 0.9;
    bool rec_auto = false;
    ParamFlags rec_pf;
    cmd_rec->add_option("cloud", rec_cloud, "input cloud (CSV or SWC)")->required();
    cmd_rec->add_option("--format", rec_format, "csv | swc (default csv)");
    cmd_rec->add_option("--r", rec_r, "shell inner radius");
    cmd_rec->add_option("--p11", rec_p11, "vertex expansion radius");
    cmd_rec->add_option("--delta", rec_delta, "Rips scale");
    cmd_rec->add_flag("--auto", rec_auto, "derive delta, r, p11 from shape parameters");
    rec_pf.attach(cmd_rec, false);
    cmd_rec->add_option("--c0", rec_c0, "tubular delta factor (default 0.9)");
    cmd_rec->add_option("-o,--output", rec_out, "output graph JSON")->required();
    cmd_rec->add_option("--dot", rec_dot, "also write DOT file");
    cmd_rec->add_option("--labels", rec_labels, "also write labeled points CSV");

    // risk
    auto* cmd_risk = app.add_subcommand("risk", "Monte Carlo reconstruction risk");
    std::string risk_spec, risk_out;
    cmd_risk->add_option("spec", risk_spec, "experiment spec JSON")->required();
    cmd_risk->add_option("-o,--output", risk_out, "output results CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_params))
            return run_params(pf, params_delta, opt_delta->count() > 0);

        if (app.got_subcommand(cmd_synth)) {
            auto g = make_generator(synth_kind, synth_alpha, synth_tau, synth_value, synth_dim);
            mgr::write_embedded_graph(g, synth_out);
            return 0;
        }

        if (app.got_subcommand(cmd_sample)) {
            auto g = mgr::read_embedded_graph(sample_graph);
            mgr::TubeModel model{std::move(g.graph), sample_sigma};
            mgr::PointCloud cloud =
                sample_grid ? mgr::grid_sample_dense(model, sample_spacing)
                            : mgr::sample_tube(model, sample_n, sample_seed);
            mgr::write_cloud(cloud, sample_out);
            return 0;
        }

        if (app.got_subcommand(cmd_rec)) {
            const auto fmt = rec_format == "swc" ? mgr::CloudFormat::Swc : mgr::CloudFormat::Csv;
            if (rec_format != "swc" && rec_format != "csv")
                throw std::invalid_argument("unknown cloud format: " + rec_format);
            const auto cloud = mgr::read_cloud(rec_cloud, fmt);
            mgr::ReconstructionConfig cfg{rec_r, rec_p11, rec_delta};
            if (rec_auto) {
                const mgr::ShapeParams p = rec_pf.to_params();
                mgr::DeltaPolicy policy;
                policy.mode = p.sigma > 0 ? mgr::DeltaPolicy::Mode::Tubular
                                          : mgr::DeltaPolicy::Mode::Noiseless;
                policy.c0 = rec_c0;
                cfg = mgr::config_for(p, policy);
            }
            const auto rep = mgr::reconstruct(cloud, cfg);
            mgr::write_graph(rep.graph, rec_out, mgr::GraphFormat::Json);
            if (!rec_dot.empty()) mgr::write_graph(rep.graph, rec_dot, mgr::GraphFormat::Dot);
            if (!rec_labels.empty()) write_labels_csv(cloud, rep, rec_labels);

            std::cout << "{\n  \"delta\": " << mgr::format_g12(cfg.delta)
                      << ",\n  \"r\": " << mgr::format_g12(cfg.r)
                      << ",\n  \"p11\": " << mgr::format_g12(cfg.p11)
                      << ",\n  \"n_points\": " << cloud.size()
                      << ",\n  \"n_vertices\": " << rep.graph.n_vertices()
                      << ",\n  \"n_edges\": " << rep.graph.n_edges()
                      << ",\n  \"diagnostics\": " << rep.diagnostics.size() << "\n}\n";
            return 0;
        }

        if (app.got_subcommand(cmd_risk)) {
            const auto spec = mgr::read_experiment_spec(risk_spec);
            const auto results = mgr::estimate_risk(spec);
            mgr::write_risk_csv(results, risk_out);
            return 0;
        }
    } catch (const mgr::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mgr::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
