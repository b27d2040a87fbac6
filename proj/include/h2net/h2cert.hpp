#pragma once

#include <optional>
#include <vector>

#include "h2net/graphs.hpp"
#include "h2net/model.hpp"
#include "h2net/synthesis.hpp"

namespace h2net {

// Full controlled network (x over w stacking):
//   Ae = [ I(x)A            I(x)BF                  ]   Ee = [ I(x)E    ]
//        [ L(x)GC1          I(x)(A-GC1) + L(x)BF    ]        [ L(x)GD1  ]
//   Ce = [ W^1/2 R^T (x) C2   W^1/2 R^T (x) D2 F ]
struct ClosedLoopNetwork {
    DenseMatrix Ae; // 2Nn x 2Nn
    DenseMatrix Ee; // 2Nn x Nq
    DenseMatrix Ce; // pK x 2Nn
};

ClosedLoopNetwork closed_loop_network(const AgentModel& model, const WeightedGraph& graph,
                                      const ProtocolGains& gains);

// Mode-lambda_i auxiliary closed loop (2n states).
struct ModalBlock {
    double lambda = 0.0;
    DenseMatrix Abar; // [[A, l BF], [GC1, A - GC1 + l BF]]
    DenseMatrix Ebar; // [[E], [G D1]]
    DenseMatrix Cbar; // [sqrt(l) C2, l sqrt(l) D2 F]
};

ModalBlock modal_block(const AgentModel& model, double lambda_i, const ProtocolGains& gains);

// H2 cost of one mode via the controllability Gramian of its block.
double modal_cost(const AgentModel& model, double lambda_i, const ProtocolGains& gains,
                  const NumericSettings& ns = NumericSettings::global());

struct SyncReport {
    bool synchronizing = false;
    std::vector<std::pair<double, bool>> modes; // (lambda_i, Hurwitz) for i = 2..N
    bool observer_ok = false;
};

// Separation check: A + lambda_i B F Hurwitz for all i >= 2 and A - G C1 Hurwitz.
SyncReport verify_synchronizing(const AgentModel& model, const WeightedGraph& graph,
                                const ProtocolGains& gains,
                                const NumericSettings& ns = NumericSettings::global());

struct CostReport {
    std::vector<std::pair<double, double>> per_mode; // (lambda_i, J_i), ascending lambda
    double total = 0.0;
    std::optional<double> quadrature_estimate;
    std::optional<double> gamma;
    std::optional<bool> suboptimal;
};

CostReport network_cost(const AgentModel& model, const WeightedGraph& graph,
                        const ProtocolGains& gains,
                        std::optional<double> gamma = std::nullopt,
                        const NumericSettings& ns = NumericSettings::global());

// Independent oracle for the modal-sum cost: Simpson integration of
// tr(T^T T), T(t) = Ce exp(Ae t) Ee, on the full network.
double impulse_cost_quadrature(const AgentModel& model, const WeightedGraph& graph,
                               const ProtocolGains& gains, double horizon, double dt,
                               const NumericSettings& ns = NumericSettings::global());

// Suboptimal output-feedback design for a single plant (no network):
// P from the CARE with weight D2^T D2, Q from the observer equation,
// F = -(D2^T D2)^-1 B^T P, G = Q C1^T.
struct SingleLoopResult {
    bool feasible = false;     // bound < gamma
    ProtocolGains gains;
    DenseMatrix P;
    DenseMatrix Q;
    double bound = 0.0;        // tr(C1 Q P Q C1^T) + tr(C2 Q C2^T)
    double closed_loop_cost = 0.0;
};

SingleLoopResult single_loop_design(const AgentModel& model, double gamma, double eps,
                                    double sigma, NoiseForm form = NoiseForm::EEt,
                                    const NumericSettings& ns = NumericSettings::global());

} // namespace h2net
