#include "h2net/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "h2net/errors.hpp"

namespace h2net {

WeightedGraph::WeightedGraph(int nodes, std::vector<Edge> edge_list)
    : node_count(nodes), edges(std::move(edge_list)) {
    if (node_count <= 0) {
        throw InvalidInput("graph must have at least one node");
    }
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
        if (e.i < 0 || e.j < 0 || e.i >= node_count || e.j >= node_count) {
            throw InvalidInput("edge endpoint out of range");
        }
        if (e.i == e.j) {
            throw InvalidInput("self-loops are not allowed");
        }
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            throw InvalidInput("edge weight must be a positive finite number");
        }
        const auto key = std::minmax(e.i, e.j);
        if (!seen.insert(key).second) {
            throw InvalidInput("duplicate edge " + std::to_string(key.first) + "-" +
                               std::to_string(key.second));
        }
    }
}

DenseMatrix laplacian(const WeightedGraph& g) {
    const std::size_t n = static_cast<std::size_t>(g.node_count);
    DenseMatrix l(n, n);
    for (const auto& e : g.edges) {
        l(e.i, e.j) = -e.w;
        l(e.j, e.i) = -e.w;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) row += l(i, j);
        }
        l(i, i) = -row;
    }
    return l;
}

Incidence incidence(const WeightedGraph& g) {
    const std::size_t n = static_cast<std::size_t>(g.node_count);
    const std::size_t k = g.edges.size();
    Incidence inc{DenseMatrix(n, k), DenseMatrix(k, k)};
    for (std::size_t c = 0; c < k; ++c) {
        const auto& e = g.edges[c];
        const int lo = std::min(e.i, e.j);
        const int hi = std::max(e.i, e.j);
        inc.R(lo, c) = 1.0;
        inc.R(hi, c) = -1.0;
        inc.W(c, c) = e.w;
    }
    return inc;
}

GraphSpectrum spectrum(const WeightedGraph& g, const NumericSettings& ns) {
    GraphSpectrum out;
    out.L = laplacian(g);
    Incidence inc = incidence(g);
    out.R = std::move(inc.R);
    out.W = std::move(inc.W);

    SymEig eig = sym_eig(out.L, ns);
    out.U = std::move(eig.vectors);
    out.lambda = std::move(eig.values);
    const double clamp = ns.tol_scale * ns.zero_eig_clamp;
    for (double& v : out.lambda) {
        if (v < 0.0 && v > -clamp) v = 0.0;
    }
    if (!out.lambda.empty()) out.lambda.front() = 0.0;
    return out;
}

bool is_connected(const WeightedGraph& g) {
    const int n = g.node_count;
    if (n <= 1) return true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                frontier.push(w);
            }
        }
    }
    return reached == n;
}

} // namespace h2net
