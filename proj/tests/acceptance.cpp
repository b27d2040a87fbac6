// Acceptance suite: one unconditional check per criterion, one printed
// PASS/FAIL line each.  Run with no arguments for all criteria or with
// "--criterion N" for a single one; the exit code is the failure count.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "h2net/h2cert.hpp"
#include "h2net/json_io.hpp"
#include "h2net/netsim.hpp"
#include "h2net/synthesis.hpp"
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

struct Line {
    std::ostringstream os;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            os << " [" << what << "]";
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

SynthesisResult reference_design(double gamma = 17.0) {
    DesignParams p;
    p.gamma = gamma;
    p.eps = 1e-3;
    p.sigma = 1e-3;
    p.noise_form = NoiseForm::EtE;
    return synthesize(reference_model(), cycle_graph(6), p);
}

double max_dev(const DenseMatrix& a, const DenseMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
        }
    }
    return worst;
}

// 1. gains/solution regression against the published reference values
bool criterion1() {
    Line line;
    const auto t0 = std::chrono::steady_clock::now();
    const SynthesisResult res = reference_design();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double dev_f = max_dev(res.gains.F, DenseMatrix{{0.2172, -0.6646}});
    const double dev_g = max_dev(res.gains.G, DenseMatrix{{0.5}, {0.5}});
    const double dev_p = max_dev(res.certificate.P,
                                 DenseMatrix{{0.9048, -2.2810}, {-2.2810, 6.9779}});
    const double dev_q = max_dev(res.certificate.Q,
                                 DenseMatrix{{0.5, 0.5}, {0.5, 0.625}});
    line.os << "F dev " << fmt(dev_f) << ", G dev " << fmt(dev_g) << ", P dev "
            << fmt(dev_p) << ", Q dev " << fmt(dev_q) << ", " << fmt(seconds) << " s";
    line.expect(dev_f <= 1e-3, "F outside 1e-3");
    line.expect(dev_g <= 1e-3, "G outside 1e-3");
    line.expect(dev_p <= 1e-3, "P outside 1e-3");
    line.expect(dev_q <= 1e-3, "Q outside 1e-3");
    line.expect(seconds < 1.0, "runtime >= 1 s");
    std::cout << "criterion 1 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 2. certified bound value
bool criterion2() {
    Line line;
    const SynthesisResult res = reference_design();
    const double bound = res.certificate.bound_total;
    line.os << "bound " << fmt(bound);
    line.expect(std::abs(bound - 16.6509) <= 1e-3, "|bound - 16.6509| > 1e-3");
    line.expect(bound < 17.0, "bound >= 17");
    std::cout << "criterion 2 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 3. guarantee chain: exact cost below the certified bound
bool criterion3() {
    Line line;
    const SynthesisResult res = reference_design();
    const CostReport rep = network_cost(reference_model(), cycle_graph(6), res.gains);
    line.os << "J = " << fmt(rep.total);
    line.expect(rep.total <= 16.6509, "J > 16.6509");
    line.expect(rep.total < 17.0, "J >= 17");
    std::cout << "criterion 3 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 4. modal decomposition equals the impulse-response quadrature
bool criterion4() {
    Line line;
    const auto t0 = std::chrono::steady_clock::now();

    const SynthesisResult res = reference_design();
    const CostReport rep = network_cost(reference_model(), cycle_graph(6), res.gains);
    const double quad =
        impulse_cost_quadrature(reference_model(), cycle_graph(6), res.gains, 60.0, 0.005);
    double worst_gap = std::abs(rep.total - quad) / (1.0 + rep.total);
    line.expect(std::abs(rep.total - quad) <= 1e-4 * (1.0 + rep.total),
                "reference design gap > 1e-4");

    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> agents(3, 5);
    std::uniform_int_distribution<std::size_t> states(2, 3);
    int done = 0, attempts = 0;
    while (done < 20 && attempts < 200) {
        ++attempts;
        const auto design = try_random_design(rng, agents(rng), states(rng));
        if (!design) continue;
        ++done;
        const CostReport r = network_cost(design->model, design->graph, design->gains);
        const double q =
            impulse_cost_quadrature(design->model, design->graph, design->gains, 60.0, 0.005);
        const double gap = std::abs(r.total - q) / (1.0 + r.total);
        worst_gap = std::max(worst_gap, gap);
        if (!(std::abs(r.total - q) <= 1e-4 * (1.0 + r.total))) {
            line.expect(false, "random design gap > 1e-4 (J=" + fmt(r.total) + ")");
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    line.os << done << " random designs, worst relative gap " << fmt(worst_gap) << ", "
            << fmt(seconds) << " s";
    line.expect(done >= 20, "fewer than 20 feasible random designs");
    line.expect(seconds < 60.0, "runtime >= 60 s");
    std::cout << "criterion 4 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 5. time-domain synchronization of the reference scenario
bool criterion5() {
    Line line;
    const SynthesisResult res = reference_design();
    Scenario sc;
    sc.x0 = DenseMatrix{{1.0, -2.0}, {2.0, -5.0}, {3.0, 1.0},
                        {4.0, 2.0}, {-1.0, 2.0}, {-3.0, 1.0}};
    sc.horizon = 20.0;
    sc.dt = 1e-3;
    const WeightedGraph graph = cycle_graph(6);
    const Trajectory traj = simulate(reference_model(), graph, res.gains, sc);

    const double dis = traj.disagreement.back();
    double w_tail = 0.0;
    for (std::size_t s = traj.samples() - traj.samples() / 10; s < traj.samples(); ++s) {
        double norm = 0.0;
        for (std::size_t k = 0; k < traj.agents * traj.state_dim; ++k) {
            norm += traj.w(s, k) * traj.w(s, k);
        }
        w_tail = std::max(w_tail, std::sqrt(norm));
    }
    const DenseMatrix lap = laplacian(graph);
    auto err_norm = [&](std::size_t sample) {
        double acc = 0.0;
        for (std::size_t a = 0; a < 6; ++a) {
            for (std::size_t k = 0; k < 2; ++k) {
                double lx = 0.0;
                for (std::size_t b = 0; b < 6; ++b) lx += lap(a, b) * traj.x(sample, b * 2 + k);
                const double e = traj.w(sample, a * 2 + k) - lx;
                acc += e * e;
            }
        }
        return std::sqrt(acc);
    };
    const double e0 = err_norm(0);
    const double eT = err_norm(traj.samples() - 1);

    line.os << "disagreement(T) " << fmt(dis) << ", protocol tail " << fmt(w_tail)
            << ", observer error " << fmt(eT) << " vs " << fmt(1e-6 * (1.0 + e0));
    line.expect(dis < 1e-3, "disagreement >= 1e-3");
    line.expect(w_tail < 1e-3, "protocol tail >= 1e-3");
    line.expect(eT < 1e-6 * (1.0 + e0), "observer error above bound");
    std::cout << "criterion 5 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 6. solver certificates
bool criterion6() {
    Line line;
    CareProblem scalar;
    scalar.A = DenseMatrix{{1.0}};
    scalar.B = DenseMatrix{{1.0}};
    scalar.Rw = DenseMatrix{{1.0}};
    scalar.Qsym = DenseMatrix{{1.0}};
    const CareSolution s = solve_care(scalar);
    const double scalar_err = std::abs(s.P(0, 0) - (1.0 + std::sqrt(2.0)));
    line.expect(scalar_err <= 1e-10, "scalar CARE error > 1e-10");

    const SynthesisResult res = reference_design();
    for (const DenseMatrix* sol : {&res.certificate.P, &res.certificate.Q}) {
        line.expect(cholesky_pd(*sol).has_value(), "solution not PD");
    }
    const double pn = res.certificate.P.frobenius_norm();
    const double qn = res.certificate.Q.frobenius_norm();
    line.expect(res.certificate.riccati_residual_P <= 1e-8 * (1.0 + pn * pn),
                "state residual too large");
    line.expect(res.certificate.riccati_residual_Q <= 1e-8 * (1.0 + qn * qn),
                "observer residual too large");
    for (bool ok : res.certificate.modal_hurwitz) line.expect(ok, "modal Hurwitz failed");
    line.expect(res.certificate.observer_hurwitz, "observer Hurwitz failed");

    std::mt19937 rng(99);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const DenseMatrix a = random_hurwitz(rng, 4);
        const DenseMatrix m = random_matrix(rng, 4, 4);
        const DenseMatrix q = m * m.transposed();
        const DenseMatrix x = solve_lyapunov(a, q, LyapunovSide::CoefficientOnRight);
        const DenseMatrix oracle = gramian_quadrature(a, q, 80.0, 0.01);
        const double gap = frobenius_distance(x, oracle) / (1.0 + oracle.frobenius_norm());
        worst = std::max(worst, gap);
    }
    line.expect(worst <= 1e-6, "Lyapunov vs quadrature oracle gap > 1e-6");
    line.os << "scalar CARE error " << fmt(scalar_err) << ", residuals ("
            << fmt(res.certificate.riccati_residual_P) << ", "
            << fmt(res.certificate.riccati_residual_Q) << "), worst Gramian gap "
            << fmt(worst);
    std::cout << "criterion 6 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 7. spectral fixtures
bool criterion7() {
    Line line;
    const GraphSpectrum c6 = spectrum(cycle_graph(6));
    const std::vector<double> expected{0.0, 1.0, 1.0, 3.0, 3.0, 4.0};
    double worst_eig = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
        worst_eig = std::max(worst_eig, std::abs(c6.lambda[k] - expected[k]));
    }
    line.expect(worst_eig <= 1e-10, "cycle spectrum off by > 1e-10");

    std::mt19937 rng(7);
    double worst_fact = 0.0;
    bool sums_exact = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> nodes(2, 12);
        const WeightedGraph g = random_connected_graph(rng, nodes(rng));
        const DenseMatrix l = laplacian(g);
        const Incidence inc = incidence(g);
        worst_fact = std::max(worst_fact,
                              frobenius_distance(inc.R * inc.W * inc.R.transposed(), l));
        for (std::size_t i = 0; i < l.rows(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < l.cols(); ++j) row += l(i, j);
            if (row != 0.0) sums_exact = false;
        }
        for (std::size_t c = 0; c < inc.R.cols(); ++c) {
            double col = 0.0;
            for (std::size_t i = 0; i < inc.R.rows(); ++i) col += inc.R(i, c);
            if (col != 0.0) sums_exact = false;
        }
    }
    line.expect(worst_fact <= 1e-12, "L != R W R^T within 1e-12");
    line.expect(sums_exact, "L*1 or R^T*1 not exactly zero");
    line.os << "worst eigen dev " << fmt(worst_eig) << ", worst factorization dev "
            << fmt(worst_fact);
    std::cout << "criterion 7 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 8. perturbation monotonicity and sweep selection
bool criterion8() {
    Line line;
    const AgentModel model = reference_model();
    const DenseMatrix q_small = observer_riccati(model, 1e-3, NoiseForm::EtE).P;
    const DenseMatrix q_large = observer_riccati(model, 1e-2, NoiseForm::EtE).P;
    DenseMatrix qd = q_large - q_small;
    for (std::size_t i = 0; i < 2; ++i) qd(i, i) += 1e-12;
    line.expect(cholesky_pd(qd).has_value(), "Q(1e-2) - Q(1e-3) not PSD");

    const double c = 2.0 / 21.0;
    const double denom = -c * c * 64.0 + 2.0 * c * 4.0;
    CareProblem p;
    p.A = model.A;
    p.B = model.B;
    p.Rw = (1.0 / denom) * DenseMatrix::identity(1);
    p.Qsym = 4.0 * (model.C2.transposed() * model.C2);
    p.perturbation = 1e-3;
    const DenseMatrix p_small = solve_care(p).P;
    p.perturbation = 1e-2;
    const DenseMatrix p_large = solve_care(p).P;
    DenseMatrix pd = p_large - p_small;
    for (std::size_t i = 0; i < 2; ++i) pd(i, i) += 1e-12;
    line.expect(cholesky_pd(pd).has_value(), "P(1e-2) - P(1e-3) not PSD");

    SweepGrid grid;
    grid.c_values = {c};
    grid.eps_values = {1e-3, 1e-2};
    grid.sigma_values = {1e-3};
    grid.noise_form = NoiseForm::EtE;
    const SweepResult swept = sweep(model, cycle_graph(6), 20.0, grid);
    line.expect(swept.any_feasible && swept.best.certificate.params.eps == 1e-3,
                "sweep did not select eps = 1e-3");
    line.os << "monotonicity certificates hold, sweep picked eps = "
            << (swept.any_feasible ? fmt(swept.best.certificate.params.eps) : "none");
    std::cout << "criterion 8 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

// 9. CLI infeasibility exit codes
bool criterion9() {
    Line line;
    const std::string cli = H2NET_CLI_PATH;
    const std::string fixtures = H2NET_FIXTURE_DIR;
    const auto dir = std::filesystem::temp_directory_path() / "h2net_acceptance";
    std::filesystem::create_directories(dir);
    const std::string out16 = (dir / "g16.json").string();
    const std::string out17 = (dir / "g17.json").string();
    const std::string log16 = (dir / "g16.log").string();
    const std::string log17 = (dir / "g17.log").string();

    auto run = [&](const std::string& gamma, const std::string& out, const std::string& log) {
        const std::string cmd = cli + " design --model " + fixtures +
                                "/reference_model.json --graph " + fixtures +
                                "/cycle6.json --gamma " + gamma +
                                " --noise-form EtE --out " + out + " > " + log + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    const int code16 = run("16", out16, log16);
    const int code17 = run("17", out17, log17);
    line.expect(code16 == 2, "gamma=16 exit code " + std::to_string(code16) + " != 2");
    line.expect(code17 == 0, "gamma=17 exit code " + std::to_string(code17) + " != 0");

    std::ifstream in(log16);
    std::stringstream buf;
    buf << in.rdbuf();
    line.expect(buf.str().find("bound") != std::string::npos,
                "gamma=16 run does not report the achieved bound");
    line.os << "exit codes " << code16 << "/" << code17;
    std::cout << "criterion 9 " << (line.ok ? "PASS" : "FAIL") << ": " << line.os.str() << "\n";
    return line.ok;
}

} // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--criterion") selected = std::atoi(argv[i + 1]);
    }
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                            criterion6, criterion7, criterion8, criterion9};
    int failures = 0;
    for (int k = 1; k <= 9; ++k) {
        if (selected != 0 && selected != k) continue;
        try {
            if (!criteria[k - 1]()) ++failures;
        } catch (const std::exception& e) {
            std::cout << "criterion " << k << " FAIL: exception: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures;
}
