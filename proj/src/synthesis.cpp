#include "h2net/synthesis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "h2net/errors.hpp"

namespace h2net {

NormalizationReport check_normalization(const AgentModel& model, double tol) {
    NormalizationReport rep;
    rep.dev_d1_et = (model.D1 * model.E.transposed()).max_abs();
    rep.dev_d2t_c2 = (model.D2.transposed() * model.C2).max_abs();
    rep.dev_d1_d1t = (model.D1 * model.D1.transposed() -
                      DenseMatrix::identity(model.r())).max_abs();
    rep.dev_d2t_d2 = (model.D2.transposed() * model.D2 -
                      DenseMatrix::identity(model.m())).max_abs();
    rep.d1_et_zero = rep.dev_d1_et <= tol;
    rep.d2t_c2_zero = rep.dev_d2t_c2 <= tol;
    rep.d1_d1t_identity = rep.dev_d1_d1t <= tol;
    rep.d2t_d2_identity = rep.dev_d2t_d2 <= tol;
    return rep;
}

CRange admissible_c_range(double lambda2, double lambdaN, CaseSelect which) {
    if (!(lambda2 > 0.0) || !(lambdaN >= lambda2)) {
        throw InvalidInput("admissible_c_range: need 0 < lambda2 <= lambdaN");
    }
    const double split = 2.0 / (lambda2 * lambda2 + lambda2 * lambdaN + lambdaN * lambdaN);
    if (which == CaseSelect::CaseII) {
        return CRange{0.0, split, false};
    }
    // Auto resolves to case i.
    return CRange{split, 2.0 / (lambdaN * lambdaN), true};
}

double bound_S(const DenseMatrix& P, const DenseMatrix& Q, double lambdaN,
               const DenseMatrix& C1, const DenseMatrix& C2) {
    const DenseMatrix c1q = C1 * Q;
    const double term1 = (c1q * P * c1q.transposed()).trace();
    const double term2 = (C2 * Q * C2.transposed()).trace();
    return term1 + lambdaN * term2;
}

namespace {

struct ResolvedC {
    double c = 0.0;
    CaseSelect case_used = CaseSelect::CaseI;
};

ResolvedC resolve_c(const DesignParams& params, double lambda2, double lambdaN) {
    const CRange range_i = admissible_c_range(lambda2, lambdaN, CaseSelect::CaseI);
    const CRange range_ii = admissible_c_range(lambda2, lambdaN, CaseSelect::CaseII);
    if (!params.c.has_value()) {
        switch (params.case_select) {
            case CaseSelect::CaseII:
                // open interval; take c just inside its upper end
                return {0.999 * range_ii.hi, CaseSelect::CaseII};
            case CaseSelect::CaseI:
            case CaseSelect::Auto:
                return {range_i.lo, CaseSelect::CaseI};
        }
    }
    const double c = *params.c;
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidInput("coupling gain c must be positive");
    }
    switch (params.case_select) {
        case CaseSelect::CaseI:
            if (!range_i.contains(c)) {
                throw InvalidInput("c outside the case-i admissible range");
            }
            return {c, CaseSelect::CaseI};
        case CaseSelect::CaseII:
            if (!range_ii.contains(c)) {
                throw InvalidInput("c outside the case-ii admissible range");
            }
            return {c, CaseSelect::CaseII};
        case CaseSelect::Auto:
            if (range_i.contains(c)) return {c, CaseSelect::CaseI};
            if (range_ii.contains(c)) return {c, CaseSelect::CaseII};
            throw InvalidInput("c outside both admissible ranges");
    }
    throw InvalidInput("unreachable case selection");
}

} // namespace

SynthesisResult synthesize(const AgentModel& model, const WeightedGraph& graph,
                           const DesignParams& params, const NumericSettings& ns) {
    if (!(params.gamma > 0.0)) throw InvalidInput("gamma must be positive");
    if (!(params.eps > 0.0) || !(params.sigma > 0.0)) {
        throw InvalidInput("eps and sigma must be positive");
    }
    if (!is_connected(graph)) {
        throw InvalidInput("communication graph is not connected");
    }
    const NormalizationReport norm = check_normalization(model);
    if (!norm.all_ok()) {
        std::ostringstream msg;
        msg << "model normalization failed: max deviations"
            << " D1*E^T=" << norm.dev_d1_et
            << " D2^T*C2=" << norm.dev_d2t_c2
            << " D1*D1^T-I=" << norm.dev_d1_d1t
            << " D2^T*D2-I=" << norm.dev_d2t_d2;
        throw InvalidInput(msg.str());
    }
    if (graph.node_count < 2) {
        throw InvalidInput("network design needs at least two agents");
    }

    const GraphSpectrum spec = spectrum(graph, ns);
    const std::size_t big_n = static_cast<std::size_t>(graph.node_count);
    const double lambda2 = spec.lambda[1];
    const double lambdaN = spec.lambda[big_n - 1];
    if (!(lambda2 > 0.0)) {
        throw InvalidInput("graph spectrum has no positive lambda_2");
    }

    const ResolvedC rc = resolve_c(params, lambda2, lambdaN);
    const double lambda_star = rc.case_used == CaseSelect::CaseI ? lambdaN : lambda2;
    const double denom = -rc.c * rc.c * lambda_star * lambda_star * lambda_star +
                         2.0 * rc.c * lambda_star;
    if (!(denom > 0.0)) {
        throw InvalidInput("coupling gain makes R(c) lose definiteness");
    }

    const CareSolution q_sol = observer_riccati(model, params.eps, params.noise_form, ns);
    CareProblem state;
    state.A = model.A;
    state.B = model.B;
    state.Rw = (1.0 / denom) * DenseMatrix::identity(model.m());
    state.Qsym = lambdaN * (model.C2.transposed() * model.C2);
    state.perturbation = params.sigma;
    const CareSolution p_sol = solve_care(state, ns);

    SynthesisResult out;
    out.gains.F = -rc.c * (model.B.transposed() * p_sol.P);
    out.gains.G = q_sol.P * model.C1.transposed();

    DesignCertificate& cert = out.certificate;
    cert.P = p_sol.P;
    cert.Q = q_sol.P;
    cert.params = {params.gamma, rc.c, rc.case_used, params.eps, params.sigma,
                   params.noise_form};
    cert.riccati_residual_P = p_sol.residual;
    cert.riccati_residual_Q = q_sol.residual;

    cert.observer_hurwitz = is_hurwitz(model.A - out.gains.G * model.C1, ns);
    bool all_modal = true;
    cert.modal_hurwitz.reserve(big_n - 1);
    for (std::size_t i = 1; i < big_n; ++i) {
        const double li = spec.lambda[i];
        const DenseMatrix a_cl = model.A + li * (model.B * out.gains.F);
        const bool hurwitz = is_hurwitz(a_cl, ns);
        cert.modal_hurwitz.push_back(hurwitz);
        all_modal = all_modal && hurwitz;

        // strict per-mode dissipation inequality, checked rather than trusted
        const double sq = std::sqrt(li);
        const DenseMatrix ci = sq * model.C2 + (li * sq) * (model.D2 * out.gains.F);
        const DenseMatrix lhs = a_cl.transposed() * cert.P + cert.P * a_cl +
                                ci.transposed() * ci;
        const SymEig eig = sym_eig(lhs, ns);
        const double margin = ns.tol_scale * ns.strict_eig_margin * lhs.frobenius_norm();
        if (!(eig.values.back() < -margin)) {
            throw SolverFailure("synthesize: per-mode dissipation inequality failed "
                                "(NotSynchronizing)");
        }
    }
    if (!all_modal || !cert.observer_hurwitz) {
        throw SolverFailure("synthesize: Hurwitz certificate failed (NotSynchronizing)");
    }

    cert.S_value = bound_S(cert.P, cert.Q, lambdaN, model.C1, model.C2);
    cert.bound_total = static_cast<double>(big_n - 1) * cert.S_value;
    out.feasible = cert.bound_total < params.gamma;
    return out;
}

SweepResult sweep(const AgentModel& model, const WeightedGraph& graph, double gamma,
                  const SweepGrid& grid, const NumericSettings& ns) {
    if (grid.c_values.empty() || grid.eps_values.empty() || grid.sigma_values.empty()) {
        throw InvalidInput("sweep: all grids must be nonempty");
    }
    SweepResult out;
    out.smallest_bound = std::numeric_limits<double>::infinity();
    for (double c : grid.c_values) {
        for (double eps : grid.eps_values) {
            for (double sigma : grid.sigma_values) {
                DesignParams params;
                params.gamma = gamma;
                params.c = c;
                params.case_select = grid.case_select;
                params.eps = eps;
                params.sigma = sigma;
                params.noise_form = grid.noise_form;
                ++out.evaluated;
                SynthesisResult r;
                try {
                    r = synthesize(model, graph, params, ns);
                } catch (const NumericalError&) {
                    ++out.failed;
                    continue;
                }
                out.smallest_bound = std::min(out.smallest_bound, r.certificate.bound_total);
                if (r.feasible &&
                    (!out.any_feasible ||
                     r.certificate.bound_total < out.best.certificate.bound_total)) {
                    out.any_feasible = true;
                    out.best = std::move(r);
                }
            }
        }
    }
    return out;
}

} // namespace h2net
