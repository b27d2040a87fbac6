#pragma once

#include <vector>

#include "h2net/matkit.hpp"

namespace h2net {

// Undirected weighted simple graph.  Each unordered pair appears once,
// indices are 0-based, weights strictly positive.
struct WeightedGraph {
    struct Edge {
        int i = 0;
        int j = 0;
        double w = 1.0;
    };

    int node_count = 0;
    std::vector<Edge> edges;

    WeightedGraph() = default;
    WeightedGraph(int nodes, std::vector<Edge> edge_list);

    int edge_count() const { return static_cast<int>(edges.size()); }
};

struct Incidence {
    DenseMatrix R; // N x K, each column +1 at the smaller node index, -1 at the larger
    DenseMatrix W; // K x K diagonal edge weights
};

struct GraphSpectrum {
    DenseMatrix L;              // N x N Laplacian
    DenseMatrix R;              // N x K incidence
    DenseMatrix W;              // K x K diagonal weights
    DenseMatrix U;              // orthogonal, U^T L U = diag(lambda)
    std::vector<double> lambda; // ascending; lambda[0] == 0 exactly
};

// L = D - A; the diagonal is accumulated as the negated row sum of the
// off-diagonal entries so that L * 1 = 0 holds by construction order.
DenseMatrix laplacian(const WeightedGraph& g);

Incidence incidence(const WeightedGraph& g);

GraphSpectrum spectrum(const WeightedGraph& g,
                       const NumericSettings& ns = NumericSettings::global());

// Breadth-first reachability from node 0 (vacuously true for one node).
bool is_connected(const WeightedGraph& g);

} // namespace h2net
