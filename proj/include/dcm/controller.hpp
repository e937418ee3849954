#ifndef DCM_CONTROLLER_HPP
#define DCM_CONTROLLER_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "dcm/barriers.hpp"
#include "dcm/comm_graph.hpp"
#include "dcm/rssi_field.hpp"

namespace dcm {

struct QpProblem {
    int n_robots = 0;
    int dim = 2;
    Eigen::VectorXd u_ref;           // stacked, length n_robots * dim
    std::vector<ConstraintRow> rows;
    std::vector<double> alpha;       // per-robot Euclidean control bound
    double slack_penalty = 1e6;
};

enum class QpStatus { Optimal, Relaxed, Infeasible };

struct QpSolution {
    Eigen::VectorXd u;
    std::map<std::size_t, double> slacks;  // row index -> slack value (relaxable rows)
    std::vector<std::size_t> active_set;   // indices into p.rows
    QpStatus status = QpStatus::Optimal;
};

/// Minimally-invasive QP: min ||u - u_ref||^2 + slack_penalty * sum s^2
/// s.t. a.u >= b (non-relaxable), a.u + s >= b with s >= 0 (relaxable),
/// |u_i[k]| <= alpha_i / sqrt(dim). Primal active-set iteration on the KKT
/// system; deterministic for identical inputs. Throws IterationLimit after
/// 500 iterations on feasible-looking problems.
QpSolution solve(const QpProblem& p);

struct DcmParams {
    double psi = -30.0;
    double epsilon = -25.0;
    double gamma = 1.0;
    double r_s = 0.28;
    double slack_penalty = 1e6;
    GpHyper hyper;
    double dedup_res = 0.05;
    std::size_t cap = 400;
};

struct StepOutput {
    QpSolution qp;
    SpanningTree tree;
    CommGraph graph;
    Eigen::MatrixXd rssi_matrix;
};

/// One step of the connectivity-maintenance pipeline: measure + admit,
/// strong graph + edge weights under u_ref, MST, constraint rows, QP.
/// Mutates the model store. Throws DisconnectedAtEntry if the strong graph
/// is not connected when the step begins.
StepOutput dcm_step(const JointState& x, const Eigen::VectorXd& u_ref, ModelStore& models,
                    const FieldSpec& field, const ObstacleSet& obs,
                    const std::vector<double>& alpha, const DcmParams& params);

}  // namespace dcm

#endif
