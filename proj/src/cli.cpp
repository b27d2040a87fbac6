#include "h2net/cli.hpp"

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "h2net/errors.hpp"
#include "h2net/h2cert.hpp"
#include "h2net/json_io.hpp"
#include "h2net/netsim.hpp"
#include "h2net/synthesis.hpp"

namespace h2net {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitIo = 5;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

CaseSelect parse_case(const std::string& s) {
    if (s == "auto") return CaseSelect::Auto;
    if (s == "i") return CaseSelect::CaseI;
    if (s == "ii") return CaseSelect::CaseII;
    throw InvalidInput("case must be auto, i or ii, got: " + s);
}

std::optional<double> parse_c_flag(const std::string& s) {
    if (s == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw InvalidInput("");
        return v;
    } catch (const std::exception&) {
        throw InvalidInput("--c must be a number or \"auto\", got: " + s);
    }
}

std::vector<double> parse_grid(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw InvalidInput("");
        } catch (const std::exception&) {
            throw InvalidInput(flag + ": cannot parse \"" + item + "\"");
        }
    }
    if (out.empty()) throw InvalidInput(flag + " must list at least one value");
    return out;
}

void print_certificate_summary(const SynthesisResult& result, double gamma) {
    const DesignCertificate& cert = result.certificate;
    std::cout << "c = " << fmt(cert.params.c) << " (case " << case_name(cert.params.case_used)
              << "), eps = " << fmt(cert.params.eps) << ", sigma = " << fmt(cert.params.sigma)
              << ", noise form " << noise_form_name(cert.params.noise_form) << "\n";
    std::cout << "S(P,Q) = " << fmt(cert.S_value) << "\n";
    std::cout << "bound (N-1)*S = " << fmt(cert.bound_total) << "\n";
    std::cout << "margin gamma - bound = " << fmt(gamma - cert.bound_total) << "\n";
}

int cmd_design(const std::string& model_path, const std::string& graph_path,
               double gamma, const std::string& c_flag, const std::string& case_flag,
               double eps, double sigma, const std::string& noise_flag,
               const std::string& out_path) {
    const AgentModel model = load_model(model_path);
    const WeightedGraph graph = load_graph(graph_path);
    DesignParams params;
    params.gamma = gamma;
    params.c = parse_c_flag(c_flag);
    params.case_select = parse_case(case_flag);
    params.eps = eps;
    params.sigma = sigma;
    params.noise_form = parse_noise_form(noise_flag);

    const SynthesisResult result = synthesize(model, graph, params);
    print_certificate_summary(result, gamma);
    save_gains(out_path, result.gains, result.certificate, result.feasible);
    std::cout << "gains written to " << out_path << "\n";
    if (!result.feasible) {
        std::cout << "infeasible: achieved bound " << fmt(result.certificate.bound_total)
                  << " >= gamma " << fmt(gamma) << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_verify(const std::string& model_path, const std::string& graph_path,
               const std::string& gains_path, std::optional<double> gamma) {
    const AgentModel model = load_model(model_path);
    const WeightedGraph graph = load_graph(graph_path);
    const ProtocolGains gains = load_gains(gains_path);

    const SyncReport rep = verify_synchronizing(model, graph, gains);
    for (std::size_t i = 0; i < rep.modes.size(); ++i) {
        std::cout << "mode " << i + 2 << " (lambda = " << fmt(rep.modes[i].first)
                  << "): " << (rep.modes[i].second ? "Hurwitz" : "NOT Hurwitz") << "\n";
    }
    std::cout << "observer A - G C1: " << (rep.observer_ok ? "Hurwitz" : "NOT Hurwitz") << "\n";
    std::cout << "synchronizing: " << (rep.synchronizing ? "yes" : "no") << "\n";
    if (!rep.synchronizing) {
        if (gamma.has_value()) std::cout << "suboptimal: no (not synchronizing)\n";
        return kExitInfeasible;
    }
    if (gamma.has_value()) {
        const CostReport cost = network_cost(model, graph, gains, gamma);
        std::cout << "J(F,G) = " << fmt(cost.total) << "\n";
        std::cout << "suboptimal (J < " << fmt(*gamma) << "): "
                  << (*cost.suboptimal ? "yes" : "no") << "\n";
        if (!*cost.suboptimal) return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_cost(const std::string& model_path, const std::string& graph_path,
             const std::string& gains_path, const std::vector<double>& quad) {
    const AgentModel model = load_model(model_path);
    const WeightedGraph graph = load_graph(graph_path);
    const ProtocolGains gains = load_gains(gains_path);

    const CostReport rep = network_cost(model, graph, gains);
    for (std::size_t i = 0; i < rep.per_mode.size(); ++i) {
        std::cout << "J_" << i + 2 << " (lambda = " << fmt(rep.per_mode[i].first)
                  << ") = " << fmt(rep.per_mode[i].second) << "\n";
    }
    std::cout << "J total = " << fmt(rep.total) << "\n";
    if (!quad.empty()) {
        const double horizon = quad.at(0);
        const double dt = quad.at(1);
        const double est = impulse_cost_quadrature(model, graph, gains, horizon, dt);
        const double gap = std::abs(est - rep.total) / (1.0 + rep.total);
        std::cout << "quadrature estimate (T = " << fmt(horizon) << ", dt = " << fmt(dt)
                  << ") = " << fmt(est) << "\n";
        std::cout << "relative gap = " << fmt(gap) << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::string& model_path, const std::string& graph_path,
                 const std::string& gains_path, const std::string& scenario_path,
                 const std::string& out_path, const std::string& gnuplot_path) {
    const AgentModel model = load_model(model_path);
    const WeightedGraph graph = load_graph(graph_path);
    const ProtocolGains gains = load_gains(gains_path);
    const Scenario scenario = load_scenario(scenario_path);

    const Trajectory traj = simulate(model, graph, gains, scenario);
    export_csv(traj, out_path);
    std::cout << traj.samples() << " samples written to " << out_path << "\n";
    const DisagreementProfile prof = disagreement_profile(traj);
    std::cout << "final max-pair disagreement = " << fmt(prof.max_pair.back()) << "\n";
    std::cout << "final ||zeta|| = " << fmt(prof.zeta_norm.back()) << "\n";
    if (!gnuplot_path.empty()) {
        emit_gnuplot(traj, gnuplot_path, out_path);
        std::cout << "gnuplot script written to " << gnuplot_path << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const std::string& model_path, const std::string& graph_path, double gamma,
              const std::string& c_grid, const std::string& eps_grid,
              const std::string& sigma_grid, const std::string& case_flag,
              const std::string& noise_flag, const std::string& out_path) {
    const AgentModel model = load_model(model_path);
    const WeightedGraph graph = load_graph(graph_path);
    SweepGrid grid;
    grid.c_values = parse_grid(c_grid, "--c-grid");
    grid.eps_values = parse_grid(eps_grid, "--eps-grid");
    grid.sigma_values = parse_grid(sigma_grid, "--sigma-grid");
    grid.case_select = parse_case(case_flag);
    grid.noise_form = parse_noise_form(noise_flag);

    const SweepResult result = sweep(model, graph, gamma, grid);
    std::cout << "evaluated " << result.evaluated << " grid points (" << result.failed
              << " failed)\n";
    if (!result.any_feasible) {
        if (result.evaluated > result.failed) {
            std::cout << "all infeasible: smallest achieved bound = "
                      << fmt(result.smallest_bound) << "\n";
        } else {
            std::cout << "all grid points failed\n";
        }
        return kExitInfeasible;
    }
    print_certificate_summary(result.best, gamma);
    if (!out_path.empty()) {
        save_gains(out_path, result.best.gains, result.best.certificate, true);
        std::cout << "best gains written to " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_graph_info(const std::string& graph_path) {
    const WeightedGraph graph = load_graph(graph_path);
    const bool connected = is_connected(graph);
    const GraphSpectrum spec = spectrum(graph);
    std::cout << "N = " << graph.node_count << ", K = " << graph.edge_count() << "\n";
    std::cout << "connected: " << (connected ? "yes" : "no") << "\n";
    std::cout << "eigenvalues:";
    for (double v : spec.lambda) std::cout << " " << fmt(v);
    std::cout << "\n";
    if (!connected || graph.node_count < 2) return kExitOk;
    const double l2 = spec.lambda[1];
    const double lN = spec.lambda.back();
    std::cout << "lambda_2 = " << fmt(l2) << ", lambda_N = " << fmt(lN) << "\n";
    const CRange ri = admissible_c_range(l2, lN, CaseSelect::CaseI);
    const CRange rii = admissible_c_range(l2, lN, CaseSelect::CaseII);
    std::cout << "case-i c range: [" << fmt(ri.lo) << ", " << fmt(ri.hi) << ")\n";
    std::cout << "case-ii c range: (" << fmt(rii.lo) << ", " << fmt(rii.hi) << ")\n";
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Distributed H2 protocol synthesis, certification and simulation"};
    app.require_subcommand(1);

    std::string model_path, graph_path, gains_path, scenario_path;
    std::string out_path, gnuplot_path;
    std::string c_flag = "auto", case_flag = "auto", noise_flag = "EEt";
    double gamma = 0.0, eps = 1e-3, sigma = 1e-3;
    std::optional<double> gamma_opt;
    std::vector<double> quad;
    std::string c_grid, eps_grid, sigma_grid;

    auto* design = app.add_subcommand("design", "Compute protocol gains and a certificate");
    design->add_option("--model", model_path)->required();
    design->add_option("--graph", graph_path)->required();
    design->add_option("--gamma", gamma)->required();
    design->add_option("--c", c_flag, "coupling gain or \"auto\"");
    design->add_option("--case", case_flag, "auto, i or ii");
    design->add_option("--eps", eps);
    design->add_option("--sigma", sigma);
    design->add_option("--noise-form", noise_flag, "EEt or EtE");
    design->add_option("--out", out_path)->required();

    auto* verify = app.add_subcommand("verify", "Check synchronization of given gains");
    verify->add_option("--model", model_path)->required();
    verify->add_option("--graph", graph_path)->required();
    verify->add_option("--gains", gains_path)->required();
    double verify_gamma = 0.0;
    auto* vg = verify->add_option("--gamma", verify_gamma);

    auto* cost = app.add_subcommand("cost", "Evaluate the exact H2 cost of given gains");
    cost->add_option("--model", model_path)->required();
    cost->add_option("--graph", graph_path)->required();
    cost->add_option("--gains", gains_path)->required();
    cost->add_option("--quadrature", quad, "horizon dt")->expected(2);

    auto* simulate = app.add_subcommand("simulate", "Integrate the controlled network");
    simulate->add_option("--model", model_path)->required();
    simulate->add_option("--graph", graph_path)->required();
    simulate->add_option("--gains", gains_path)->required();
    simulate->add_option("--scenario", scenario_path)->required();
    simulate->add_option("--out", out_path)->required();
    simulate->add_option("--gnuplot", gnuplot_path);

    auto* sweep_cmd = app.add_subcommand("sweep", "Grid search over (c, eps, sigma)");
    sweep_cmd->add_option("--model", model_path)->required();
    sweep_cmd->add_option("--graph", graph_path)->required();
    sweep_cmd->add_option("--gamma", gamma)->required();
    sweep_cmd->add_option("--c-grid", c_grid)->required();
    sweep_cmd->add_option("--eps-grid", eps_grid)->required();
    sweep_cmd->add_option("--sigma-grid", sigma_grid)->required();
    sweep_cmd->add_option("--case", case_flag, "auto, i or ii");
    sweep_cmd->add_option("--noise-form", noise_flag, "EEt or EtE");
    sweep_cmd->add_option("--out", out_path);

    auto* ginfo = app.add_subcommand("graph-info", "Spectral summary of a graph file");
    ginfo->add_option("--graph", graph_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (design->parsed()) {
            return cmd_design(model_path, graph_path, gamma, c_flag, case_flag, eps, sigma,
                              noise_flag, out_path);
        }
        if (verify->parsed()) {
            if (vg->count() > 0) gamma_opt = verify_gamma;
            return cmd_verify(model_path, graph_path, gains_path, gamma_opt);
        }
        if (cost->parsed()) {
            return cmd_cost(model_path, graph_path, gains_path, quad);
        }
        if (simulate->parsed()) {
            return cmd_simulate(model_path, graph_path, gains_path, scenario_path, out_path,
                                gnuplot_path);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(model_path, graph_path, gamma, c_grid, eps_grid, sigma_grid,
                             case_flag, noise_flag, out_path);
        }
        if (ginfo->parsed()) {
            return cmd_graph_info(graph_path);
        }
        std::cerr << "no subcommand given\n";
        return kExitInvalidInput;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace h2net
