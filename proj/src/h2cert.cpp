#include "h2net/h2cert.hpp"

#include <cmath>
#include <string>

#include "h2net/errors.hpp"

namespace h2net {

namespace {

void check_gain_shapes(const AgentModel& model, const ProtocolGains& gains) {
    if (gains.F.rows() != model.m() || gains.F.cols() != model.n()) {
        throw InvalidInput("gain F must be m x n");
    }
    if (gains.G.rows() != model.n() || gains.G.cols() != model.r()) {
        throw InvalidInput("gain G must be n x r");
    }
}

} // namespace

ClosedLoopNetwork closed_loop_network(const AgentModel& model, const WeightedGraph& graph,
                                      const ProtocolGains& gains) {
    check_gain_shapes(model, gains);
    const std::size_t n = model.n();
    const std::size_t big_n = static_cast<std::size_t>(graph.node_count);
    const DenseMatrix eye_n = DenseMatrix::identity(big_n);
    const DenseMatrix lap = laplacian(graph);
    const Incidence inc = incidence(graph);
    const std::size_t k = inc.W.rows();

    DenseMatrix w_half_rt(k, big_n);
    {
        const DenseMatrix rt = inc.R.transposed();
        for (std::size_t a = 0; a < k; ++a) {
            const double s = std::sqrt(inc.W(a, a));
            for (std::size_t b = 0; b < big_n; ++b) {
                w_half_rt(a, b) = s * rt(a, b);
            }
        }
    }

    const DenseMatrix bf = model.B * gains.F;
    const DenseMatrix gc1 = gains.G * model.C1;
    const DenseMatrix a_obs = model.A - gc1;

    ClosedLoopNetwork net;
    net.Ae = DenseMatrix(2 * big_n * n, 2 * big_n * n);
    net.Ae.set_block(0, 0, kron(eye_n, model.A));
    net.Ae.set_block(0, big_n * n, kron(eye_n, bf));
    net.Ae.set_block(big_n * n, 0, kron(lap, gc1));
    net.Ae.set_block(big_n * n, big_n * n, kron(eye_n, a_obs) + kron(lap, bf));

    net.Ee = DenseMatrix(2 * big_n * n, big_n * model.q());
    net.Ee.set_block(0, 0, kron(eye_n, model.E));
    net.Ee.set_block(big_n * n, 0, kron(lap, gains.G * model.D1));

    net.Ce = DenseMatrix(model.p() * k, 2 * big_n * n);
    net.Ce.set_block(0, 0, kron(w_half_rt, model.C2));
    net.Ce.set_block(0, big_n * n, kron(w_half_rt, model.D2 * gains.F));
    return net;
}

ModalBlock modal_block(const AgentModel& model, double lambda_i, const ProtocolGains& gains) {
    check_gain_shapes(model, gains);
    if (!(lambda_i > 0.0)) {
        throw InvalidInput("modal_block: lambda must be positive (modes start at i=2)");
    }
    const std::size_t n = model.n();
    const DenseMatrix bf = model.B * gains.F;
    const DenseMatrix gc1 = gains.G * model.C1;

    ModalBlock blk;
    blk.lambda = lambda_i;
    blk.Abar = DenseMatrix(2 * n, 2 * n);
    blk.Abar.set_block(0, 0, model.A);
    blk.Abar.set_block(0, n, lambda_i * bf);
    blk.Abar.set_block(n, 0, gc1);
    blk.Abar.set_block(n, n, model.A - gc1 + lambda_i * bf);

    blk.Ebar = DenseMatrix(2 * n, model.q());
    blk.Ebar.set_block(0, 0, model.E);
    blk.Ebar.set_block(n, 0, gains.G * model.D1);

    const double sq = std::sqrt(lambda_i);
    blk.Cbar = DenseMatrix(model.p(), 2 * n);
    blk.Cbar.set_block(0, 0, sq * model.C2);
    blk.Cbar.set_block(0, n, (lambda_i * sq) * (model.D2 * gains.F));
    return blk;
}

double modal_cost(const AgentModel& model, double lambda_i, const ProtocolGains& gains,
                  const NumericSettings& ns) {
    const ModalBlock blk = modal_block(model, lambda_i, gains);
    if (!is_hurwitz(blk.Abar, ns)) {
        throw SolverFailure("modal_cost: modal closed loop is unstable");
    }
    const DenseMatrix x = solve_lyapunov(blk.Abar, blk.Ebar * blk.Ebar.transposed(),
                                         LyapunovSide::CoefficientOnRight, ns);
    return (blk.Cbar * x * blk.Cbar.transposed()).trace();
}

SyncReport verify_synchronizing(const AgentModel& model, const WeightedGraph& graph,
                                const ProtocolGains& gains, const NumericSettings& ns) {
    check_gain_shapes(model, gains);
    if (!is_connected(graph)) {
        throw InvalidInput("verify_synchronizing: communication graph is not connected");
    }
    const GraphSpectrum spec = spectrum(graph, ns);
    SyncReport rep;
    rep.observer_ok = is_hurwitz(model.A - gains.G * model.C1, ns);
    bool all = rep.observer_ok;
    for (std::size_t i = 1; i < spec.lambda.size(); ++i) {
        const double li = spec.lambda[i];
        const bool ok = is_hurwitz(model.A + li * (model.B * gains.F), ns);
        rep.modes.emplace_back(li, ok);
        all = all && ok;
    }
    rep.synchronizing = all;
    return rep;
}

CostReport network_cost(const AgentModel& model, const WeightedGraph& graph,
                        const ProtocolGains& gains, std::optional<double> gamma,
                        const NumericSettings& ns) {
    const SyncReport sync = verify_synchronizing(model, graph, gains, ns);
    if (!sync.synchronizing) {
        throw SolverFailure("network_cost: protocol does not synchronize the network");
    }
    const GraphSpectrum spec = spectrum(graph, ns);
    CostReport rep;
    for (std::size_t i = 1; i < spec.lambda.size(); ++i) {
        const double li = spec.lambda[i];
        const double ji = modal_cost(model, li, gains, ns);
        rep.per_mode.emplace_back(li, ji);
        rep.total += ji;
    }
    if (gamma.has_value()) {
        rep.gamma = gamma;
        rep.suboptimal = rep.total < *gamma;
    }
    return rep;
}

double impulse_cost_quadrature(const AgentModel& model, const WeightedGraph& graph,
                               const ProtocolGains& gains, double horizon, double dt,
                               const NumericSettings& ns) {
    if (!(horizon > 0.0) || !(dt > 0.0) || horizon < dt) {
        throw InvalidInput("impulse_cost_quadrature: need horizon >= dt > 0");
    }
    const SyncReport sync = verify_synchronizing(model, graph, gains, ns);
    if (!sync.synchronizing) {
        throw SolverFailure("impulse_cost_quadrature: protocol does not synchronize");
    }
    const ClosedLoopNetwork net = closed_loop_network(model, graph, gains);

    std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    if (steps < 2) steps = 2;
    if (steps % 2 == 1) ++steps;
    const double h = horizon / static_cast<double>(steps);

    // exp(Ae t_k) Ee advances one Simpson node per multiply
    const DenseMatrix phi = expm(net.Ae, h, ns);
    DenseMatrix x = net.Ee;
    double acc = 0.0;
    for (std::size_t node = 0; node <= steps; ++node) {
        const double f = [&] {
            const DenseMatrix y = net.Ce * x;
            double s = 0.0;
            for (double v : y.entries()) s += v * v;
            return s; // tr(T^T T) = ||T||_F^2
        }();
        double weight = 1.0;
        if (node > 0 && node < steps) weight = (node % 2 == 1) ? 4.0 : 2.0;
        acc += weight * f;
        if (node < steps) x = phi * x;
    }
    return acc * h / 3.0;
}

SingleLoopResult single_loop_design(const AgentModel& model, double gamma, double eps,
                                    double sigma, NoiseForm form, const NumericSettings& ns) {
    if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
    if (!(eps > 0.0) || !(sigma > 0.0)) throw InvalidInput("eps and sigma must be positive");
    const NormalizationReport norm = check_normalization(model);
    // D2^T D2 only needs to be positive definite here; its inverse enters F.
    if (!norm.d1_et_zero || !norm.d2t_c2_zero || !norm.d1_d1t_identity) {
        throw InvalidInput("single_loop_design: D1 E^T = 0, D2^T C2 = 0, D1 D1^T = I required");
    }
    const DenseMatrix rw = symmetrize(model.D2.transposed() * model.D2);
    if (!cholesky_pd(rw, ns)) {
        throw InvalidInput("single_loop_design: D2^T D2 must be positive definite");
    }

    CareProblem state;
    state.A = model.A;
    state.B = model.B;
    state.Rw = rw;
    state.Qsym = model.C2.transposed() * model.C2;
    state.perturbation = sigma;
    const CareSolution p_sol = solve_care(state, ns);
    const CareSolution q_sol = observer_riccati(model, eps, form, ns);

    SingleLoopResult out;
    out.P = p_sol.P;
    out.Q = q_sol.P;
    out.gains.F = -lu_solve(rw, model.B.transposed() * out.P, ns);
    out.gains.G = out.Q * model.C1.transposed();

    if (!is_hurwitz(model.A + model.B * out.gains.F, ns) ||
        !is_hurwitz(model.A - out.gains.G * model.C1, ns)) {
        throw SolverFailure("single_loop_design: closed loop not stabilized (NotStabilizing)");
    }

    const DenseMatrix c1q = model.C1 * out.Q;
    out.bound = (c1q * out.P * c1q.transposed()).trace() +
                (model.C2 * out.Q * model.C2.transposed()).trace();
    out.feasible = out.bound < gamma;

    const std::size_t n = model.n();
    DenseMatrix aa(2 * n, 2 * n);
    const DenseMatrix bf = model.B * out.gains.F;
    const DenseMatrix gc1 = out.gains.G * model.C1;
    aa.set_block(0, 0, model.A);
    aa.set_block(0, n, bf);
    aa.set_block(n, 0, gc1);
    aa.set_block(n, n, model.A + bf - gc1);
    DenseMatrix ea(2 * n, model.q());
    ea.set_block(0, 0, model.E);
    ea.set_block(n, 0, out.gains.G * model.D1);
    DenseMatrix ca(model.p(), 2 * n);
    ca.set_block(0, 0, model.C2);
    ca.set_block(0, n, model.D2 * out.gains.F);

    const DenseMatrix x = solve_lyapunov(aa, ea * ea.transposed(),
                                         LyapunovSide::CoefficientOnRight, ns);
    out.closed_loop_cost = (ca * x * ca.transposed()).trace();
    return out;
}

} // namespace h2net
