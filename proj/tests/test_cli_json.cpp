#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "h2net/cli.hpp"
#include "h2net/errors.hpp"
#include "h2net/json_io.hpp"
#include "support.hpp"

#ifndef H2NET_FIXTURE_DIR
#define H2NET_FIXTURE_DIR "fixtures"
#endif
#ifndef H2NET_CLI_PATH
#define H2NET_CLI_PATH "h2net"
#endif

using namespace h2net;
using namespace h2net::testing;

namespace {

std::string fixture(const std::string& name) {
    return std::string(H2NET_FIXTURE_DIR) + "/" + name;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("h2net_cli_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("h2net");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("model and graph fixtures load and validate") {
    const AgentModel model = load_model(fixture("reference_model.json"));
    CHECK(model.n() == 2);
    CHECK(model.m() == 1);
    CHECK(model.q() == 2);
    CHECK(model.r() == 1);
    CHECK(model.p() == 2);
    CHECK(frobenius_distance(model.A, reference_model().A) == 0.0);

    const WeightedGraph graph = load_graph(fixture("cycle6.json"));
    CHECK(graph.node_count == 6);
    CHECK(graph.edge_count() == 6);
    CHECK(is_connected(graph));

    const Scenario sc = load_scenario(fixture("reference_scenario.json"));
    CHECK(sc.x0.rows() == 6);
    CHECK(sc.w0.empty());
    CHECK(sc.horizon == 20.0);
    CHECK(sc.disturbance.type == Disturbance::Type::None);
}

TEST_CASE("scenario with explicit protocol states and a pulse") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("sc.json"));
        out << R"({"x0": [[1, 0], [0, 1]], "w0": [[0.5, 0], [0, 0.5]],
                   "disturbance": {"type": "pulse", "agent": 1, "channel": 0,
                                   "width": 0.01},
                   "T": 2.0, "dt": 0.01})";
    }
    const Scenario sc = load_scenario(tmp.file("sc.json"));
    CHECK(sc.w0.rows() == 2);
    CHECK(sc.w0(0, 0) == 0.5);
    CHECK(sc.disturbance.type == Disturbance::Type::Pulse);
    REQUIRE(sc.disturbance.pulses.size() == 1);
    CHECK(sc.disturbance.pulses[0].height == doctest::Approx(100.0)); // 1/width
}

TEST_CASE("json loaders reject bad files") {
    TempDir tmp;
    CHECK_THROWS_AS(load_model(tmp.file("missing.json")), IoError);

    {
        std::ofstream out(tmp.file("broken.json"));
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_model(tmp.file("broken.json")), InvalidInput);

    {
        std::ofstream out(tmp.file("ragged.json"));
        out << R"({"A": [[1, 2], [3]], "B": [[1]], "C1": [[1]], "D1": [[1]],
                  "C2": [[1]], "D2": [[1]], "E": [[1]]})";
    }
    CHECK_THROWS_AS(load_model(tmp.file("ragged.json")), InvalidInput);

    {
        std::ofstream out(tmp.file("badgraph.json"));
        out << R"({"nodes": 3, "edges": [[0, 3, 1.0]]})";
    }
    CHECK_THROWS_AS(load_graph(tmp.file("badgraph.json")), InvalidInput);

    {
        std::ofstream out(tmp.file("badsc.json"));
        out << R"({"x0": [[0, 0]], "T": 1.0, "dt": -0.1})";
    }
    CHECK_THROWS_AS(load_scenario(tmp.file("badsc.json")), InvalidInput);
}

TEST_CASE("gains round-trip through JSON at full precision") {
    TempDir tmp;
    DesignParams p;
    p.gamma = 17.0;
    p.noise_form = NoiseForm::EtE;
    const SynthesisResult res = synthesize(reference_model(), cycle_graph(6), p);
    const std::string path = tmp.file("gains.json");
    save_gains(path, res.gains, res.certificate, res.feasible);
    const ProtocolGains loaded = load_gains(path);
    CHECK(frobenius_distance(loaded.F, res.gains.F) == 0.0);
    CHECK(frobenius_distance(loaded.G, res.gains.G) == 0.0);
}

TEST_CASE("cli design, verify, cost round trip on the reference fixtures") {
    TempDir tmp;
    const std::string gains = tmp.file("gains.json");

    CHECK(run({"design", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gamma", "17", "--noise-form", "EtE",
               "--out", gains}) == 0);

    CHECK(run({"verify", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", gains}) == 0);

    CHECK(run({"verify", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", gains, "--gamma", "25"}) == 0);

    CHECK(run({"cost", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", gains,
               "--quadrature", "30", "0.01"}) == 0);
}

TEST_CASE("cli exit codes") {
    TempDir tmp;
    const std::string gains = tmp.file("gains.json");

    // infeasible tolerance
    CHECK(run({"design", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gamma", "16", "--noise-form", "EtE",
               "--out", gains}) == 2);

    // missing file
    CHECK(run({"design", "--model", tmp.file("nope.json"), "--graph",
               fixture("cycle6.json"), "--gamma", "17", "--out", gains}) == 5);

    // schema violation
    {
        std::ofstream out(tmp.file("broken.json"));
        out << "{";
    }
    CHECK(run({"graph-info", "--graph", tmp.file("broken.json")}) == 3);

    // disconnected graph is invalid input for design
    {
        std::ofstream out(tmp.file("disconnected.json"));
        out << R"({"nodes": 4, "edges": [[0, 1, 1.0], [2, 3, 1.0]]})";
    }
    CHECK(run({"design", "--model", fixture("reference_model.json"), "--graph",
               tmp.file("disconnected.json"), "--gamma", "17", "--out", gains}) == 3);

    // bad flag value
    CHECK(run({"design", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gamma", "17", "--c", "banana",
               "--out", gains}) == 3);
}

TEST_CASE("cli graph-info and sweep") {
    TempDir tmp;
    CHECK(run({"graph-info", "--graph", fixture("cycle6.json")}) == 0);

    const std::string best = tmp.file("best.json");
    CHECK(run({"sweep", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gamma", "20",
               "--c-grid", "0.0952380952380952,0.11",
               "--eps-grid", "0.001,0.01", "--sigma-grid", "0.001",
               "--noise-form", "EtE", "--out", best}) == 0);
    CHECK(std::filesystem::exists(best));

    CHECK(run({"sweep", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gamma", "1",
               "--c-grid", "0.0952380952380952", "--eps-grid", "0.001",
               "--sigma-grid", "0.001", "--noise-form", "EtE"}) == 2);
}

TEST_CASE("cli verify exit codes follow the verdict") {
    TempDir tmp;
    const std::string gains = tmp.file("gains.json");
    REQUIRE(run({"design", "--model", fixture("reference_model.json"), "--graph",
                 fixture("cycle6.json"), "--gamma", "17", "--noise-form", "EtE",
                 "--out", gains}) == 0);

    // synchronizing but the exact cost exceeds this gamma
    CHECK(run({"verify", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", gains, "--gamma", "30"}) == 0);
    CHECK(run({"verify", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", gains, "--gamma", "5"}) == 2);

    // zero gains cannot synchronize this marginally stable agent
    {
        std::ofstream out(tmp.file("zeros.json"));
        out << R"({"F": [[0.0, 0.0]], "G": [[0.0], [0.0]]})";
    }
    CHECK(run({"verify", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", tmp.file("zeros.json")}) == 2);
}

TEST_CASE("H2NET_NUM_TOL is validated at startup") {
    const std::string cli = H2NET_CLI_PATH;
    const std::string graph = fixture("cycle6.json");
    auto status_of = [&](const std::string& env) {
        const std::string cmd =
            env + " " + cli + " graph-info --graph " + graph + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    CHECK(status_of("H2NET_NUM_TOL=1.0") == 0);
    CHECK(status_of("H2NET_NUM_TOL=10") == 0);
    CHECK(status_of("H2NET_NUM_TOL=banana") == 3);
    CHECK(status_of("H2NET_NUM_TOL=-3") == 3);
}

TEST_CASE("cli simulate writes trajectory files") {
    TempDir tmp;
    const std::string gains = tmp.file("gains.json");
    REQUIRE(run({"design", "--model", fixture("reference_model.json"), "--graph",
                 fixture("cycle6.json"), "--gamma", "17", "--noise-form", "EtE",
                 "--out", gains}) == 0);

    // short horizon keeps the test quick
    {
        std::ofstream out(tmp.file("scenario.json"));
        out << R"({"x0": [[1,-2],[2,-5],[3,1],[4,2],[-1,2],[-3,1]],
                   "w0": "zeros", "disturbance": {"type": "none"},
                   "T": 0.5, "dt": 0.001})";
    }
    const std::string csv = tmp.file("traj.csv");
    const std::string gp = tmp.file("traj.gp");
    CHECK(run({"simulate", "--model", fixture("reference_model.json"), "--graph",
               fixture("cycle6.json"), "--gains", gains, "--scenario",
               tmp.file("scenario.json"), "--out", csv, "--gnuplot", gp}) == 0);
    CHECK(std::filesystem::exists(csv));
    CHECK(std::filesystem::exists(gp));

    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("t,x_1_1", 0) == 0);
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 501);
}
