#include "dcm/comm_graph.hpp"

#include <algorithm>
#include <numeric>

#include "dcm/numerics.hpp"

namespace dcm {

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[b] = a;
        return true;
    }
};

}  // namespace

bool CommGraph::has_edge(int i, int j) const {
    if (i > j) {
        std::swap(i, j);
    }
    return std::binary_search(edges.begin(), edges.end(), Edge{i, j});
}

CommGraph build_graph(const Eigen::MatrixXd& rssi_matrix, double epsilon) {
    CommGraph g;
    g.n = static_cast<int>(rssi_matrix.rows());
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            if (std::min(rssi_matrix(i, j), rssi_matrix(j, i)) >= epsilon) {
                g.edges.emplace_back(i, j);
            }
        }
    }
    return g;
}

bool is_strongly_connected(const CommGraph& g) {
    if (g.n <= 1) {
        return true;
    }
    UnionFind uf(g.n);
    int components = g.n;
    for (const auto& [i, j] : g.edges) {
        if (uf.unite(i, j)) {
            --components;
        }
    }
    return components == 1;
}

double edge_weight(const GpEval& eval_ij, const GpEval& eval_ji, double hdot_ij, double hdot_ji,
                   double gamma) {
    return -(hdot_ij + gamma * eval_ij.h + hdot_ji + gamma * eval_ji.h);
}

SpanningTree min_spanning_tree(const CommGraph& g) {
    if (!is_strongly_connected(g)) {
        throw Disconnected("min_spanning_tree: graph is not connected");
    }
    std::vector<Edge> order = g.edges;
    std::sort(order.begin(), order.end(), [&](const Edge& a, const Edge& b) {
        const double wa = g.weights.at(a);
        const double wb = g.weights.at(b);
        if (wa != wb) {
            return wa < wb;
        }
        return a < b;  // lexicographic tie-break keeps replays identical
    });

    SpanningTree t;
    t.n = g.n;
    UnionFind uf(g.n);
    for (const auto& e : order) {
        if (uf.unite(e.first, e.second)) {
            t.tree_edges.push_back(e);
            if (static_cast<int>(t.tree_edges.size()) == g.n - 1) {
                break;
            }
        }
    }
    std::sort(t.tree_edges.begin(), t.tree_edges.end());
    return t;
}

double algebraic_connectivity(const Eigen::MatrixXd& adjacency) {
    const Eigen::Index n = adjacency.rows();
    Eigen::MatrixXd lap = -adjacency;
    for (Eigen::Index i = 0; i < n; ++i) {
        lap(i, i) = adjacency.row(i).sum();
    }
    return numerics::second_smallest_eigenvalue(lap);
}

}  // namespace dcm
