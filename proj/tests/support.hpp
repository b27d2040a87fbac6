#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "h2net/errors.hpp"
#include "h2net/graphs.hpp"
#include "h2net/model.hpp"
#include "h2net/riccati.hpp"
#include "h2net/synthesis.hpp"

namespace h2net::testing {

inline AgentModel reference_model() {
    return AgentModel({{-2.0, 2.0}, {-1.0, 1.0}},  // A
                      {{0.0}, {1.0}},              // B
                      {{1.0, 0.0}},                // C1
                      {{0.0, 1.0}},                // D1
                      {{0.0, 1.0}, {0.0, 0.0}},    // C2
                      {{0.0}, {1.0}},              // D2
                      {{0.0, 0.0}, {0.5, 0.0}});   // E
}

inline WeightedGraph cycle_graph(int n, double w = 1.0) {
    std::vector<WeightedGraph::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
    return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph path_graph(int n, double w = 1.0) {
    std::vector<WeightedGraph::Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
    return WeightedGraph(n, std::move(edges));
}

inline bool approx_equal(const DenseMatrix& a, const DenseMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - b(i, j)) > tol) return false;
        }
    }
    return true;
}

inline DenseMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c,
                                 double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
    }
    return m;
}

inline DenseMatrix random_symmetric(std::mt19937& rng, std::size_t n, double scale = 1.0) {
    return symmetrize(random_matrix(rng, n, n, scale));
}

// A = M - (||M||_F + 1) I is Hurwitz for any M (spectral radius <= ||M||_F).
inline DenseMatrix random_hurwitz(std::mt19937& rng, std::size_t n) {
    DenseMatrix m = random_matrix(rng, n, n);
    const double shift = m.frobenius_norm() + 1.0;
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= shift;
    return m;
}

// Independent Gramian oracle: Simpson quadrature of the integral
// X = int_0^T exp(A t) Q exp(A^T t) dt, advanced one node at a time.
inline DenseMatrix gramian_quadrature(const DenseMatrix& a, const DenseMatrix& q,
                                      double horizon, double dt) {
    std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    if (steps % 2 == 1) ++steps;
    const double h = horizon / static_cast<double>(steps);
    const DenseMatrix phi = expm(a, h);
    DenseMatrix e = DenseMatrix::identity(a.rows());
    DenseMatrix acc(a.rows(), a.cols());
    for (std::size_t node = 0; node <= steps; ++node) {
        double weight = 1.0;
        if (node > 0 && node < steps) weight = (node % 2 == 1) ? 4.0 : 2.0;
        acc += weight * (e * q * e.transposed());
        if (node < steps) e = phi * e;
    }
    return (h / 3.0) * acc;
}

// Connected graph with dyadic-rational weights (exact in binary floating
// point): a random spanning tree plus a few extra edges.
inline WeightedGraph random_connected_graph(std::mt19937& rng, int n) {
    std::vector<WeightedGraph::Edge> edges;
    std::uniform_int_distribution<int> num(128, 512);
    auto weight = [&]() { return static_cast<double>(num(rng)) / 256.0; };
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        edges.push_back({parent(rng), v, weight()});
    }
    std::bernoulli_distribution extra(0.3);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool present = std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
                return (e.i == i && e.j == j) || (e.i == j && e.j == i);
            });
            if (!present && extra(rng)) edges.push_back({i, j, weight()});
        }
    }
    return WeightedGraph(n, std::move(edges));
}

// Random agent with the normalized disturbance/performance structure
// (D1 = [0 1], D2 = [0;1], matching zero blocks in E and C2) and spectral
// abscissa of A capped via a shifted Hurwitz certificate.
inline AgentModel random_normalized_model(std::mt19937& rng, std::size_t n) {
    DenseMatrix a = random_matrix(rng, n, n);
    const DenseMatrix eye = DenseMatrix::identity(n);
    for (int guard = 0; guard < 40 && !is_hurwitz(a - 0.05 * eye); ++guard) {
        a -= 0.25 * eye;
    }
    DenseMatrix b = random_matrix(rng, n, 1);
    if (b.frobenius_norm() < 0.3) b(n - 1, 0) = 1.0;
    DenseMatrix c1 = random_matrix(rng, 1, n);
    if (c1.frobenius_norm() < 0.3) c1(0, 0) = 1.0;

    DenseMatrix e(n, 2);
    const DenseMatrix e_col = random_matrix(rng, n, 1);
    e.set_block(0, 0, e_col);
    DenseMatrix c2(2, n);
    c2.set_block(0, 0, random_matrix(rng, 1, n));
    return AgentModel(a, b, c1, DenseMatrix{{0.0, 1.0}}, c2,
                      DenseMatrix{{0.0}, {1.0}}, e);
}

struct RandomDesign {
    AgentModel model;
    WeightedGraph graph;
    ProtocolGains gains;
    DesignCertificate certificate;
};

// One feasible random design with a certified closed-loop decay margin, or
// nullopt when this draw fails (caller redraws).
inline std::optional<RandomDesign> try_random_design(std::mt19937& rng, int agents,
                                                     std::size_t n,
                                                     double decay_margin = 0.1) {
    const WeightedGraph graph = random_connected_graph(rng, agents);
    const AgentModel model = random_normalized_model(rng, n);
    DesignParams params;
    params.gamma = 1e9;
    params.eps = 0.05;
    params.sigma = 0.05;
    SynthesisResult result;
    try {
        result = synthesize(model, graph, params);
    } catch (const NumericalError&) {
        return std::nullopt;
    }
    if (!result.feasible) return std::nullopt;

    const DenseMatrix eye = DenseMatrix::identity(n);
    const GraphSpectrum spec = spectrum(graph);
    for (std::size_t i = 1; i < spec.lambda.size(); ++i) {
        const DenseMatrix shifted =
            model.A + spec.lambda[i] * (model.B * result.gains.F) + decay_margin * eye;
        if (!is_hurwitz(shifted)) return std::nullopt;
    }
    if (!is_hurwitz(model.A - result.gains.G * model.C1 + decay_margin * eye)) {
        return std::nullopt;
    }
    return RandomDesign{model, graph, result.gains, result.certificate};
}

} // namespace h2net::testing
