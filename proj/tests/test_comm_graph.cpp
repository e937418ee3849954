#include <doctest.h>

#include <random>

#include "dcm/comm_graph.hpp"

using namespace dcm;

namespace {

Eigen::MatrixXd sym_rssi(int n, double value) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, value);
    m.diagonal().setZero();
    return m;
}

// Exhaustive spanning-tree enumeration oracle: minimum total weight over all
// edge subsets of size n-1 that form a spanning tree.
double brute_force_mst_weight(const CommGraph& g) {
    const int n = g.n;
    const int m = static_cast<int>(g.edges.size());
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) != n - 1) continue;
        CommGraph sub;
        sub.n = n;
        double total = 0.0;
        for (int e = 0; e < m; ++e) {
            if (mask & (1u << e)) {
                sub.edges.push_back(g.edges[e]);
                total += g.weights.at(g.edges[e]);
            }
        }
        if (is_strongly_connected(sub)) best = std::min(best, total);
    }
    return best;
}

GpEval eval_with_h(double h) {
    GpEval e;
    e.h = h;
    e.mu = h;
    return e;
}

}  // namespace

TEST_CASE("build_graph strong-edge rule") {
    Eigen::MatrixXd m = sym_rssi(2, -20.0);
    m(1, 0) = -26.0;  // asymmetry blocks the edge
    CHECK(build_graph(m, -25.0).edges.empty());

    m(1, 0) = -25.0;
    m(0, 1) = -25.0;  // boundary inclusive
    CHECK(build_graph(m, -25.0).edges.size() == 1);

    CHECK(build_graph(sym_rssi(4, -20.0), -25.0).edges.size() == 6);
}

TEST_CASE("is_strongly_connected") {
    CommGraph path;
    path.n = 5;
    for (int i = 0; i + 1 < 5; ++i) path.edges.emplace_back(i, i + 1);
    CHECK(is_strongly_connected(path));

    CommGraph partial;
    partial.n = 5;
    partial.edges = {{0, 1}, {1, 2}, {0, 2}};
    CHECK_FALSE(is_strongly_connected(partial));

    CommGraph single;
    single.n = 1;
    CHECK(is_strongly_connected(single));
}

TEST_CASE("edge_weight follows the negated barrier-rate sum") {
    CHECK(edge_weight(eval_with_h(0), eval_with_h(0), 0, 0, 1.0) == doctest::Approx(0.0));
    CHECK(edge_weight(eval_with_h(2), eval_with_h(2), 0, 0, 1.0) == doctest::Approx(-4.0));
    CHECK(edge_weight(eval_with_h(1), eval_with_h(1), -3, -3, 1.0) == doctest::Approx(4.0));

    // healthier edge -> strictly lower weight
    double prev = edge_weight(eval_with_h(0), eval_with_h(1), -1, 0.5, 1.0);
    for (double h = 0.5; h < 5.0; h += 0.5) {
        const double w = edge_weight(eval_with_h(h), eval_with_h(1), -1, 0.5, 1.0);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("min_spanning_tree basics") {
    CommGraph tri;
    tri.n = 3;
    tri.edges = {{0, 1}, {0, 2}, {1, 2}};
    tri.weights = {{{0, 1}, -5.0}, {{0, 2}, 3.0}, {{1, 2}, -1.0}};
    const auto t = min_spanning_tree(tri);
    CHECK(t.tree_edges == std::vector<Edge>{{0, 1}, {1, 2}});

    // equal weights on a 4-cycle: lexicographic tie-break
    CommGraph cyc;
    cyc.n = 4;
    cyc.edges = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
    for (const auto& e : cyc.edges) cyc.weights[e] = 1.0;
    CHECK(min_spanning_tree(cyc).tree_edges == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});

    // a tree input maps to itself
    CommGraph tree;
    tree.n = 4;
    tree.edges = {{0, 2}, {1, 2}, {2, 3}};
    for (const auto& e : tree.edges) tree.weights[e] = -2.0;
    CHECK(min_spanning_tree(tree).tree_edges == tree.edges);

    CommGraph disc;
    disc.n = 3;
    disc.edges = {{0, 1}};
    disc.weights[{0, 1}] = 0.0;
    CHECK_THROWS_AS(min_spanning_tree(disc), Disconnected);
}

TEST_CASE("MST matches exhaustive enumeration on random graphs") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> w(-10.0, 10.0);
    int done = 0;
    while (done < 60) {
        const int n = 3 + static_cast<int>(rng() % 4);
        CommGraph g;
        g.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 2 == 0) {
                    g.edges.emplace_back(i, j);
                    g.weights[{i, j}] = w(rng);
                }
        if (!is_strongly_connected(g)) continue;
        ++done;
        const auto t = min_spanning_tree(g);
        CHECK(static_cast<int>(t.tree_edges.size()) == n - 1);
        double total = 0.0;
        for (const auto& e : t.tree_edges) total += g.weights.at(e);
        CHECK(total == doctest::Approx(brute_force_mst_weight(g)).epsilon(1e-12));
        // acyclic + connected by construction:
        CommGraph as_graph;
        as_graph.n = n;
        as_graph.edges = t.tree_edges;
        CHECK(is_strongly_connected(as_graph));
    }
}

TEST_CASE("algebraic connectivity of small graphs") {
    Eigen::MatrixXd k3 = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
    CHECK(algebraic_connectivity(k3) == doctest::Approx(3.0));

    Eigen::MatrixXd p3 = Eigen::MatrixXd::Zero(3, 3);
    p3(0, 1) = p3(1, 0) = p3(1, 2) = p3(2, 1) = 1;
    CHECK(algebraic_connectivity(p3) == doctest::Approx(1.0));

    CHECK(algebraic_connectivity(Eigen::MatrixXd::Zero(3, 3)) == doctest::Approx(0.0));
}

TEST_CASE("lambda2 positive iff connected on random graphs") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 9);
        CommGraph g;
        g.n = n;
        Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 3 == 0) {
                    g.edges.emplace_back(i, j);
                    adj(i, j) = adj(j, i) = 1.0;
                }
        const double l2 = algebraic_connectivity(adj);
        CHECK((l2 > 1e-10) == is_strongly_connected(g));
    }
}
