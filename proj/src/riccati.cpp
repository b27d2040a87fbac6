#include "h2net/riccati.hpp"

#include <cmath>
#include <string>

#include "h2net/errors.hpp"

namespace h2net {

namespace {

DenseMatrix vec_columns(const DenseMatrix& m) {
    DenseMatrix v(m.rows() * m.cols(), 1);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            v(j * m.rows() + i, 0) = m(i, j);
        }
    }
    return v;
}

DenseMatrix unvec_columns(const DenseMatrix& v, std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            m(i, j) = v(j * n + i, 0);
        }
    }
    return m;
}

DenseMatrix lyapunov_residual(const DenseMatrix& a, const DenseMatrix& x,
                              const DenseMatrix& q, LyapunovSide side) {
    if (side == LyapunovSide::CoefficientOnLeft) {
        return a.transposed() * x + x * a + q;
    }
    return a * x + x * a.transposed() + q;
}

} // namespace

DenseMatrix solve_lyapunov(const DenseMatrix& a, const DenseMatrix& q_sym,
                           LyapunovSide side, const NumericSettings& ns) {
    if (!a.is_square() || a.rows() != q_sym.rows() || !q_sym.is_square()) {
        throw InvalidInput("solve_lyapunov: shape mismatch");
    }
    const std::size_t n = a.rows();
    const DenseMatrix q = symmetrize(q_sym);
    const DenseMatrix eye = DenseMatrix::identity(n);
    // vec(M X) = (I (x) M) vec X,  vec(X M^T) = (M (x) I) vec X
    const DenseMatrix coeff =
        side == LyapunovSide::CoefficientOnLeft ? a.transposed() : a;
    const DenseMatrix op = kron(eye, coeff) + kron(coeff, eye);

    DenseMatrix x;
    try {
        x = unvec_columns(lu_solve(op, -vec_columns(q), ns), n);
    } catch (const SingularMatrix&) {
        throw SingularOperator("solve_lyapunov: A and -A^T share an eigenvalue");
    }
    x = symmetrize(x);
    const double res = lyapunov_residual(a, x, q, side).frobenius_norm();
    if (res > ns.tol_scale * ns.lyap_residual_rel * (1.0 + q.frobenius_norm())) {
        throw SingularOperator("solve_lyapunov: residual too large (near-singular operator)");
    }
    return x;
}

bool is_hurwitz(const DenseMatrix& a, const NumericSettings& ns) {
    if (!a.is_square()) throw InvalidInput("is_hurwitz: matrix not square");
    if (a.rows() == 0) return true;
    try {
        const DenseMatrix x = solve_lyapunov(a, DenseMatrix::identity(a.rows()),
                                             LyapunovSide::CoefficientOnLeft, ns);
        return cholesky_pd(x, ns).has_value();
    } catch (const NumericalError&) {
        return false;
    }
}

namespace {

// Bass pseudo-stabilizer: solve (A + beta I) Z + Z (A + beta I)^T = 2 B B^T
// and take K = B^T Z^-1, doubling beta when the certificate fails.
DenseMatrix stabilizing_initial_gain(const DenseMatrix& a, const DenseMatrix& b,
                                     const NumericSettings& ns) {
    const std::size_t n = a.rows(), m = b.cols();
    double beta = a.frobenius_norm() + 1.0;
    const DenseMatrix two_bbt = 2.0 * (b * b.transposed());
    for (int attempt = 0; attempt <= ns.bass_max_retries; ++attempt, beta *= 2.0) {
        try {
            const DenseMatrix shifted = a + beta * DenseMatrix::identity(n);
            const DenseMatrix z = solve_lyapunov(shifted, -two_bbt,
                                                 LyapunovSide::CoefficientOnRight, ns);
            const DenseMatrix k = lu_solve(z, b, ns).transposed(); // B^T Z^-1, Z symmetric
            if (is_hurwitz(a - b * k, ns)) {
                return k;
            }
        } catch (const NumericalError&) {
            // retry with a larger shift
        }
    }
    if (is_hurwitz(a, ns)) {
        return DenseMatrix(m, n);
    }
    throw SolverFailure("solve_care: no stabilizing initial gain found (InitFailure)");
}

} // namespace

CareSolution solve_care(const CareProblem& p, const NumericSettings& ns) {
    const std::size_t n = p.A.rows(), m = p.B.cols();
    if (!p.A.is_square() || p.B.rows() != n) throw InvalidInput("solve_care: bad A/B shapes");
    if (!p.Rw.is_square() || p.Rw.rows() != m) throw InvalidInput("solve_care: bad Rw shape");
    if (!p.Qsym.is_square() || p.Qsym.rows() != n) throw InvalidInput("solve_care: bad Qsym shape");
    if (p.perturbation < 0.0) throw InvalidInput("solve_care: negative perturbation");
    if (!cholesky_pd(p.Rw, ns)) {
        throw InvalidInput("solve_care: Rw is not positive definite");
    }

    const DenseMatrix rw = symmetrize(p.Rw);
    DenseMatrix q_total = symmetrize(p.Qsym);
    for (std::size_t i = 0; i < n; ++i) q_total(i, i) += p.perturbation;
    const SymEig forcing_eig = sym_eig(q_total, ns);
    if (forcing_eig.values.front() < -1e-9 * (1.0 + q_total.frobenius_norm())) {
        throw InvalidInput("solve_care: Qsym + perturbation*I must be positive semidefinite");
    }
    const bool forcing_pd = cholesky_pd(q_total, ns).has_value();

    DenseMatrix k = stabilizing_initial_gain(p.A, p.B, ns);
    DenseMatrix prev;
    CareSolution sol;
    bool converged = false;
    for (int step = 0; step < ns.care_max_newton; ++step) {
        const DenseMatrix a_cl = p.A - p.B * k;
        const DenseMatrix rhs = k.transposed() * rw * k + q_total;
        DenseMatrix p_next;
        try {
            p_next = solve_lyapunov(a_cl, rhs, LyapunovSide::CoefficientOnLeft, ns);
        } catch (const NumericalError& e) {
            throw SolverFailure(std::string("solve_care: Newton step lost stability: ") + e.what());
        }
        k = lu_solve(rw, p.B.transposed() * p_next, ns);
        sol.newton_steps = step + 1;
        if (step > 0 &&
            frobenius_distance(p_next, prev) <=
                ns.tol_scale * ns.care_step_tol * (1.0 + prev.frobenius_norm())) {
            prev = p_next;
            converged = true;
            break;
        }
        prev = p_next;
    }
    if (!converged) {
        throw NoConvergence("solve_care: Newton iteration did not converge");
    }

    sol.P = symmetrize(prev);
    const DenseMatrix gain = lu_solve(rw, p.B.transposed() * sol.P, ns); // Rw^-1 B^T P
    const DenseMatrix res = p.A.transposed() * sol.P + sol.P * p.A -
                            sol.P * p.B * gain + q_total;
    sol.residual = res.frobenius_norm();
    const double pn = sol.P.frobenius_norm();
    if (sol.residual > ns.tol_scale * ns.care_residual_rel * (1.0 + pn * pn)) {
        throw NoConvergence("solve_care: residual check failed");
    }
    if (!is_hurwitz(p.A - p.B * gain, ns)) {
        throw SolverFailure("solve_care: closed loop is not Hurwitz (NotStabilizing)");
    }
    if (forcing_pd) {
        if (!cholesky_pd(sol.P, ns)) {
            throw SolverFailure("solve_care: solution is not positive definite (NotStabilizing)");
        }
    } else {
        // definiteness degrades gracefully to PSD when the forcing term is only PSD
        DenseMatrix shifted = sol.P;
        const double lift = 1e-12 * (1.0 + pn);
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) += lift;
        if (!cholesky_pd(shifted, ns)) {
            throw SolverFailure("solve_care: solution is not positive semidefinite");
        }
    }
    return sol;
}

CareSolution observer_riccati(const AgentModel& model, double eps, NoiseForm form,
                              const NumericSettings& ns) {
    if (!(eps > 0.0)) throw InvalidInput("observer_riccati: eps must be positive");
    const std::size_t n = model.n();
    DenseMatrix forcing;
    if (form == NoiseForm::EEt) {
        forcing = model.E * model.E.transposed();
    } else {
        if (model.q() != n) {
            throw InvalidInput("observer_riccati: EtE noise form requires q == n");
        }
        forcing = model.E.transposed() * model.E;
    }

    CareProblem dual;
    dual.A = model.A.transposed();
    dual.B = model.C1.transposed();
    dual.Rw = DenseMatrix::identity(model.r());
    dual.Qsym = forcing;
    dual.perturbation = eps;
    return solve_care(dual, ns);
}

} // namespace h2net
