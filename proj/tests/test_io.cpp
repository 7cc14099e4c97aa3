#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#include "mgr/io.hpp"
#include "mgr/synth.hpp"

using namespace mgr;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/mgr_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& content) {
        std::ofstream out(path);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

}  // namespace

TEST_CASE("read_cloud csv") {
    TempFile f("a.csv");
    f.write("0,0\n1,0\n");
    const auto cloud = read_cloud(f.path, CloudFormat::Csv);
    CHECK(cloud.size() == 2);
    CHECK(cloud.dim() == 2);
    CHECK(cloud[1][0] == 1.0);
}

TEST_CASE("read_cloud csv with header and errors") {
    TempFile f("b.csv");
    f.write("x,y,z\n1,2,3\n4,5,6\n");
    const auto cloud = read_cloud(f.path, CloudFormat::Csv);
    CHECK(cloud.size() == 2);
    CHECK(cloud.dim() == 3);

    TempFile bad("c.csv");
    bad.write("1,2\n3,4,5\n");
    CHECK_THROWS_WITH_AS(read_cloud(bad.path, CloudFormat::Csv),
                         doctest::Contains(":2:"), IoError);

    TempFile nonnum("d.csv");
    nonnum.write("1,2\nx,4\n");
    CHECK_THROWS_AS(read_cloud(nonnum.path, CloudFormat::Csv), IoError);

    TempFile empty("e.csv");
    empty.write("");
    CHECK_THROWS_AS(read_cloud(empty.path, CloudFormat::Csv), IoError);

    CHECK_THROWS_AS(read_cloud("/nonexistent/q.csv", CloudFormat::Csv), IoError);
}

TEST_CASE("read_cloud swc") {
    TempFile f("n.swc");
    f.write("# comment line\n1 1 0.0 1.5 2.5 1.0 -1\n2 3 1.0 2.0 3.0 0.5 1\n");
    const auto cloud = read_cloud(f.path, CloudFormat::Swc);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.dim() == 3);
    CHECK(cloud[0][0] == 0.0);
    CHECK(cloud[0][1] == 1.5);
    CHECK(cloud[0][2] == 2.5);
    CHECK(cloud[1][2] == 3.0);

    TempFile bad("bad.swc");
    bad.write("1 1 0.0 1.5\n");
    CHECK_THROWS_WITH_AS(read_cloud(bad.path, CloudFormat::Swc),
                         doctest::Contains(":1:"), IoError);
}

TEST_CASE("cloud round-trip is exact") {
    const auto wc = worst_case_graph(kPi / 3, 5.0);
    const auto cloud = sample_noiseless(wc.graph, 200, 9);
    TempFile f("rt.csv");
    write_cloud(cloud, f.path);
    const auto back = read_cloud(f.path, CloudFormat::Csv);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t d = 0; d < cloud.dim(); ++d) CHECK(back[i][d] == cloud[i][d]);
}

TEST_CASE("write_graph json and dot") {
    Pseudograph path(2, {{0, 1}});
    TempFile j("g.json"), d("g.dot");
    write_graph(path, j.path, GraphFormat::Json);
    const auto back = read_pseudograph_json(j.path);
    CHECK(back == path);
    CHECK(is_isomorphic(back, path));

    write_graph(path, d.path, GraphFormat::Dot);
    const auto dot = d.read();
    CHECK(dot.find("0;") != std::string::npos);
    CHECK(dot.find("1;") != std::string::npos);
    CHECK(dot.find("0 -- 1;") != std::string::npos);

    Pseudograph loopy(1, {{0, 0}});
    write_graph(loopy, d.path, GraphFormat::Dot);
    CHECK(d.read().find("0 -- 0;") != std::string::npos);
}

TEST_CASE("embedded graph json round-trip") {
    const auto wc = worst_case_graph(kPi / 2, 1.0);
    TempFile f("wc.json");
    write_embedded_graph(wc, f.path);
    const auto back = read_embedded_graph(f.path);
    CHECK(back.graph.dim() == wc.graph.dim());
    CHECK(back.graph.total_length() ==
          doctest::Approx(wc.graph.total_length()).epsilon(1e-12));
    CHECK(is_isomorphic(back.graph.topology(), wc.graph.topology()));
    CHECK(back.params.b == wc.params.b);
    CHECK(back.params.xi == wc.params.xi);
}

TEST_CASE("experiment spec json") {
    TempFile f("spec.json");
    f.write(R"({
      "generator": {"kind": "worst_case", "alpha": 1.5707963267948966, "tau": 1.0},
      "sigma": 0.0,
      "delta": {"mode": "noiseless"},
      "n_values": [50, 100],
      "trials": 5,
      "base_seed": 77
    })");
    const auto spec = read_experiment_spec(f.path);
    CHECK(spec.trials == 5);
    CHECK(spec.base_seed == 77);
    CHECK(spec.n_values == std::vector<std::size_t>{50, 100});
    CHECK(spec.params.tau == 1.0);
    const auto res = estimate_risk(spec);
    CHECK(res.size() == 2);

    TempFile csv("res.csv");
    write_risk_csv(res, csv.path);
    const auto text = csv.read();
    CHECK(text.find("n,trials,failures,estimate,ci_low,ci_high,wall_ms") != std::string::npos);
    CHECK(text.find("\n50,5,") != std::string::npos);
}

TEST_CASE("swc morphology reconstructs through the full pipeline") {
    // synthetic neuron-style morphology: a 3D filament that branches once,
    // written in SWC format and reconstructed from the coordinates alone
    const double step = 0.02;
    std::ostringstream swc;
    swc << "# synthetic test morphology\n";
    int id = 1;
    auto emit = [&](double x, double y, double z, int parent) {
        swc << id << " 3 " << x << " " << y << " " << z << " 0.5 " << parent << "\n";
        ++id;
    };
    emit(0, 0, 0, -1);
    for (int k = 1; k <= 75; ++k) emit(k * step, 0, 0, id - 1);            // trunk
    for (int k = 1; k <= 50; ++k) emit(1.5 + k * step, k * step, 0, 76);   // branch up
    for (int k = 1; k <= 50; ++k) emit(1.5 + k * step, -k * step, 0, 76);  // branch down
    TempFile f("morph.swc");
    f.write(swc.str());

    const auto cloud = read_cloud(f.path, CloudFormat::Swc);
    REQUIRE(cloud.size() == 176);
    REQUIRE(cloud.dim() == 3);

    // branches meet at pi/2, so r = delta (1/2 + 1/(2 sin(pi/8))) etc.
    const double delta = 0.06;
    const auto rep = reconstruct(cloud, {0.108, 0.242, delta});
    CHECK(rep.diagnostics.empty());
    Pseudograph star(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(is_isomorphic(rep.graph, star));
}

TEST_CASE("format_g12") {
    CHECK(format_g12(1.0) == "1");
    CHECK(format_g12(0.1) == "0.1");
    CHECK(format_g12(1.0185092594304129629) == "1.01850925943");
}

#ifdef MGRECON_PATH

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MGRECON_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli exit codes and pipeline") {
    TempFile graph("cli_wc.json"), cloud("cli_wc.csv"), out("cli_out.json");

    CHECK(run_cli("synth --kind worst_case --alpha 1.5707963267948966 --tau 1 -o " +
                  graph.path) == 0);
    CHECK(run_cli("sample " + graph.path + " --grid --spacing 0.0356 -o " + cloud.path) == 0);
    CHECK(run_cli("reconstruct " + cloud.path +
                  " --delta 0.0712 --r 0.1286 --p11 0.3182 -o " + out.path) == 0);
    const auto g = read_pseudograph_json(out.path);
    CHECK(g.n_vertices() == 4);
    CHECK(g.n_edges() == 4);

    // invalid delta -> infeasible parameters -> exit 1
    CHECK(run_cli("reconstruct " + cloud.path + " --delta 0 --r 0.1 --p11 0.1 -o " +
                  out.path) == 1);
    // unknown flag -> usage error -> exit 2
    CHECK(run_cli("reconstruct --frobnicate") == 2);
    CHECK(run_cli("bogus_subcommand") == 2);
    // missing file -> IO error -> exit 2
    CHECK(run_cli("reconstruct /nonexistent/x.csv --delta 0.1 --r 0.1 --p11 0.1 -o " +
                  out.path) == 2);
    // infeasible params (sigma beyond the tube limit) -> exit 1
    CHECK(run_cli("params --b 1 --alpha 1.5707963267948966 --tau 1 --xi 0.5 --sigma 0.9") == 1);
    CHECK(run_cli("params --b 100 --alpha 1.0471975511965976 --tau 30 --xi 50 --sigma 0") == 0);

    // random sampling path
    CHECK(run_cli("sample " + graph.path + " --n 500 --seed 3 -o " + cloud.path) == 0);
    const auto c = read_cloud(cloud.path, CloudFormat::Csv);
    CHECK(c.size() == 500);

    // --auto derives delta, r, p11 from the shape parameters
    CHECK(run_cli("sample " + graph.path + " --grid --spacing 0.0197 -o " + cloud.path) == 0);
    CHECK(run_cli("reconstruct " + cloud.path +
                  " --auto --b 1.5707963267948966 --alpha 1.5707963267948966 --tau 1 "
                  "--xi 0.5857864376269049 --sigma 0 -o " +
                  out.path) == 0);
    const auto g2 = read_pseudograph_json(out.path);
    CHECK(g2.n_vertices() == 4);
    CHECK(g2.n_edges() == 4);
}

TEST_CASE("cli risk subcommand") {
    TempFile spec("cli_spec.json"), out("cli_risk.csv");
    spec.write(R"({
      "generator": {"kind": "g8", "value": 0.2},
      "sigma": 0.0,
      "delta": {"mode": "explicit", "value": 0.15},
      "n_values": [30, 60],
      "trials": 4,
      "base_seed": 5,
      "shape_params": {"b": 2.2566, "alpha": 3.14159265, "tau": 22.566, "xi": 2.2566, "sigma": 0}
    })");
    CHECK(run_cli("risk " + spec.path + " -o " + out.path) == 0);
    const auto text = out.read();
    CHECK(text.find("30,4,") != std::string::npos);
    CHECK(text.find("60,4,") != std::string::npos);
}

#endif  // MGRECON_PATH
