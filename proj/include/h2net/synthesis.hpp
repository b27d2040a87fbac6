#pragma once

#include <optional>
#include <vector>

#include "h2net/graphs.hpp"
#include "h2net/model.hpp"
#include "h2net/riccati.hpp"

namespace h2net {

// The four standing assumptions on the disturbance/performance channels:
// D1 E^T = 0, D2^T C2 = 0, D1 D1^T = I_r, D2^T D2 = I_m.
struct NormalizationReport {
    bool d1_et_zero = false;
    bool d2t_c2_zero = false;
    bool d1_d1t_identity = false;
    bool d2t_d2_identity = false;
    double dev_d1_et = 0.0;
    double dev_d2t_c2 = 0.0;
    double dev_d1_d1t = 0.0;
    double dev_d2t_d2 = 0.0;

    bool all_ok() const {
        return d1_et_zero && d2t_c2_zero && d1_d1t_identity && d2t_d2_identity;
    }
};

NormalizationReport check_normalization(const AgentModel& model, double tol = 1e-9);

enum class CaseSelect { CaseI, CaseII, Auto };

// Admissible coupling-gain interval.
//   case i : [ 2/(l2^2 + l2 lN + lN^2), 2/lN^2 )
//   case ii: ( 0, 2/(l2^2 + l2 lN + lN^2) )
struct CRange {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;

    bool contains(double c) const { return (lo_closed ? c >= lo : c > lo) && c < hi; }
};

CRange admissible_c_range(double lambda2, double lambdaN, CaseSelect which);

// Per-mode trace bound S(P,Q) = tr(C1 Q P Q C1^T) + lambdaN tr(C2 Q C2^T).
double bound_S(const DenseMatrix& P, const DenseMatrix& Q, double lambdaN,
               const DenseMatrix& C1, const DenseMatrix& C2);

struct DesignParams {
    double gamma = 0.0;
    std::optional<double> c;          // empty = auto (case-i left endpoint)
    CaseSelect case_select = CaseSelect::Auto;
    double eps = 1e-3;
    double sigma = 1e-3;
    NoiseForm noise_form = NoiseForm::EEt;
};

struct ProtocolGains {
    DenseMatrix F; // m x n
    DenseMatrix G; // n x r
};

struct ResolvedParams {
    double gamma = 0.0;
    double c = 0.0;
    CaseSelect case_used = CaseSelect::CaseI;
    double eps = 0.0;
    double sigma = 0.0;
    NoiseForm noise_form = NoiseForm::EEt;
};

struct DesignCertificate {
    DenseMatrix P;
    DenseMatrix Q;
    ResolvedParams params;
    double S_value = 0.0;
    double bound_total = 0.0;          // (N-1) * S
    double riccati_residual_P = 0.0;
    double riccati_residual_Q = 0.0;
    std::vector<bool> modal_hurwitz;   // i = 2..N in ascending-eigenvalue order
    bool observer_hurwitz = false;
};

struct SynthesisResult {
    bool feasible = false;             // bound_total < gamma
    ProtocolGains gains;
    DesignCertificate certificate;
};

// Design per the two-Riccati procedure: Q from the observer equation,
// P from the coupled state equation with weight R(c), F = -c B^T P,
// G = Q C1^T.  Infeasible (bound >= gamma) is a result, not an error;
// disconnected graphs and failed normalization throw InvalidInput, failed
// stability certificates throw SolverFailure.
SynthesisResult synthesize(const AgentModel& model, const WeightedGraph& graph,
                           const DesignParams& params,
                           const NumericSettings& ns = NumericSettings::global());

struct SweepGrid {
    std::vector<double> c_values;     // each must lie in its admissible range
    std::vector<double> eps_values;
    std::vector<double> sigma_values;
    CaseSelect case_select = CaseSelect::Auto;
    NoiseForm noise_form = NoiseForm::EEt;
};

struct SweepResult {
    bool any_feasible = false;
    SynthesisResult best;             // valid when any_feasible
    double smallest_bound = 0.0;      // over all grid points that produced a certificate
    std::size_t evaluated = 0;
    std::size_t failed = 0;           // grid points skipped due to solver failures
};

// Evaluate synthesize over the grid (c outer, then eps, then sigma) and keep
// the feasible certificate with the smallest bound; ties keep the earliest.
SweepResult sweep(const AgentModel& model, const WeightedGraph& graph, double gamma,
                  const SweepGrid& grid,
                  const NumericSettings& ns = NumericSettings::global());

} // namespace h2net
