#pragma once

#include "h2net/matkit.hpp"
#include "h2net/model.hpp"

namespace h2net {

enum class LyapunovSide {
    CoefficientOnLeft,  // A^T X + X A + Q = 0
    CoefficientOnRight, // A X + X A^T + Q = 0
};

// Solve the Lyapunov equation by Kronecker vectorization; the result is
// symmetrized and its residual is certified.  Throws SingularOperator when
// A and -A^T share an eigenvalue (or the solve cannot meet the residual).
DenseMatrix solve_lyapunov(const DenseMatrix& a, const DenseMatrix& q_sym,
                           LyapunovSide side,
                           const NumericSettings& ns = NumericSettings::global());

// true iff A^T X + X A + I = 0 is solvable with X positive definite.
bool is_hurwitz(const DenseMatrix& a,
                const NumericSettings& ns = NumericSettings::global());

struct CareProblem {
    DenseMatrix A;      // n x n
    DenseMatrix B;      // n x m
    DenseMatrix Rw;     // m x m, symmetric positive definite
    DenseMatrix Qsym;   // n x n, symmetric
    double perturbation = 0.0; // added as perturbation * I
};

struct CareSolution {
    DenseMatrix P;       // symmetric, stabilizing
    double residual = 0; // ||A^T P + P A - P B Rw^-1 B^T P + Qsym + pert I||_F
    int newton_steps = 0;
};

// Newton-Kleinman iteration with Bass initialization.  The returned P is
// positive definite (positive semidefinite when Qsym + perturbation*I is
// not definite) and A - B Rw^-1 B^T P carries a Hurwitz certificate.
CareSolution solve_care(const CareProblem& p,
                        const NumericSettings& ns = NumericSettings::global());

enum class NoiseForm {
    EEt, // forcing term E E^T
    EtE, // forcing term E^T E (requires q == n)
};

// Solve A Q + Q A^T - Q C1^T C1 Q + N + eps I = 0 for the observer gain,
// by dualizing to solve_care on (A^T, C1^T); the solution Q is returned in
// CareSolution::P.
CareSolution observer_riccati(const AgentModel& model, double eps, NoiseForm form,
                              const NumericSettings& ns = NumericSettings::global());

} // namespace h2net
