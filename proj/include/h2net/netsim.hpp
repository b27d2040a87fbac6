#pragma once

#include <string>
#include <vector>

#include "h2net/graphs.hpp"
#include "h2net/model.hpp"
#include "h2net/synthesis.hpp"

namespace h2net {

// Exogenous disturbance d_i(t).  Impulses are approximated by rectangular
// pulses (height defaults to 1/width); tables are piecewise constant.
struct Disturbance {
    enum class Type { None, Pulse, Table };

    struct Pulse {
        int agent = 0;
        int channel = 0;
        double start = 0.0;
        double width = 1e-3;
        double height = 1000.0;
    };

    struct TableEntry {
        int agent = 0;
        int channel = 0;
        std::vector<double> times;  // ascending
        std::vector<double> values; // same length; value holds from times[k] on
    };

    Type type = Type::None;
    std::vector<Pulse> pulses;
    std::vector<TableEntry> tables;

    // d for one agent at time t, written into out (length q).
    void sample(int agent, double t, std::vector<double>& out) const;
};

struct Scenario {
    DenseMatrix x0;         // N x n
    DenseMatrix w0;         // N x n (empty = zeros)
    Disturbance disturbance;
    double horizon = 10.0;  // seconds
    double dt = 1e-3;
};

struct Trajectory {
    std::size_t agents = 0;
    std::size_t state_dim = 0;  // n
    std::size_t input_dim = 0;  // m
    std::size_t zeta_dim = 0;   // p*K
    std::vector<double> times;
    DenseMatrix x;              // samples x (N*n)
    DenseMatrix w;              // samples x (N*n)
    DenseMatrix u;              // samples x (N*m)
    DenseMatrix zeta;           // samples x (p*K)
    std::vector<double> disagreement; // max over pairs of ||x_i - x_j||_2

    std::size_t samples() const { return times.size(); }
};

enum class RhsForm {
    PerAgentObserver,  // protocol evaluated agent by agent over the edge list
    CompactKronecker,  // stacked form with Kronecker-built system matrices
};

// Classic fixed-step RK4 on the 2Nn closed loop.  The step count is
// horizon/dt rounded so the last sample lands exactly on the horizon.
// Throws SolverFailure when any state magnitude exceeds 1e9 (Diverged).
Trajectory simulate(const AgentModel& model, const WeightedGraph& graph,
                    const ProtocolGains& gains, const Scenario& scenario,
                    RhsForm form = RhsForm::PerAgentObserver,
                    const NumericSettings& ns = NumericSettings::global());

struct DisagreementProfile {
    std::vector<double> times;
    std::vector<double> max_pair;  // max_{i<j} ||x_i - x_j||
    std::vector<double> zeta_norm; // ||zeta(t)||_2

    // true when every max_pair sample in the trailing fraction is below the
    // threshold (defaults to the last 10%).
    bool tail_below(double threshold, double fraction = 0.1) const;
};

DisagreementProfile disagreement_profile(const Trajectory& traj);

// CSV columns: t, x_<agent>_<component>..., w_..., u_..., disagreement.
void export_csv(const Trajectory& traj, const std::string& path);

// gnuplot script with one panel per state component, reading the CSV.
void emit_gnuplot(const Trajectory& traj, const std::string& script_path,
                  const std::string& csv_path);

} // namespace h2net
