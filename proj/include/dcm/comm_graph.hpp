#ifndef DCM_COMM_GRAPH_HPP
#define DCM_COMM_GRAPH_HPP

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "dcm/errors.hpp"
#include "dcm/gp_model.hpp"

namespace dcm {

using Edge = std::pair<int, int>;  // undirected, i < j canonical

/// Undirected strong-edge communication graph: edge (i,j) present iff RSSI
/// clears the strong threshold in both directions.
struct CommGraph {
    int n = 0;
    std::vector<Edge> edges;             // sorted lexicographically
    std::map<Edge, double> weights;      // set after weight assignment

    bool has_edge(int i, int j) const;
};

struct SpanningTree {
    int n = 0;
    std::vector<Edge> tree_edges;  // exactly n-1, lexicographic order
};

/// Edge (i,j) included iff min(R_ij, R_ji) >= epsilon (inclusive).
/// The diagonal of the matrix is ignored.
CommGraph build_graph(const Eigen::MatrixXd& rssi_matrix, double epsilon);

/// Union-find connectivity; a single node is trivially connected.
bool is_strongly_connected(const CommGraph& g);

/// Constraint-violation weight of one undirected edge under the nominal
/// controller: -(hdot_ij + gamma h_ij + hdot_ji + gamma h_ji).
double edge_weight(const GpEval& eval_ij, const GpEval& eval_ji, double hdot_ij, double hdot_ji,
                   double gamma);

/// Kruskal MST with lexicographic (i,j) tie-break; negative weights allowed.
/// Throws Disconnected if g is not connected.
SpanningTree min_spanning_tree(const CommGraph& g);

/// lambda_2 of the Laplacian L = D - A of a 0/1 adjacency matrix.
double algebraic_connectivity(const Eigen::MatrixXd& adjacency);

}  // namespace dcm

#endif
