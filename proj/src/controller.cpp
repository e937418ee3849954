#include "dcm/controller.hpp"

#include <algorithm>
#include <cmath>

#include "dcm/numerics.hpp"

namespace dcm {

namespace {

constexpr double kKktTol = 1e-8;
constexpr int kMaxIter = 500;
// Internal penalty attached to non-relaxable rows so the working problem is
// always feasible; a hard slack above kHardFeasTol at the optimum means the
// original hard constraints are contradictory.
constexpr double kHardPenalty = 1e14;
constexpr double kHardFeasTol = 1e-6;

// Internal constraint: a.z >= b over z = [u; s].
struct DenseRow {
    Eigen::VectorXd a;
    double b = 0.0;
    std::size_t source_row = SIZE_MAX;  // index into p.rows, SIZE_MAX for box/slack-bound
};

}  // namespace

QpSolution solve(const QpProblem& p) {
    const int nu = p.n_robots * p.dim;
    if (p.u_ref.size() != nu) {
        throw DimensionMismatch("solve: u_ref length does not match n_robots * dim");
    }

    // One internal slack per row. Relaxable rows carry the configured penalty;
    // hard rows get kHardPenalty, which keeps the relaxed problem feasible
    // from any start while pinning their slack to ~0 whenever a feasible point
    // exists.
    const int nr = static_cast<int>(p.rows.size());
    const int nz = nu + nr;

    // Quadratic cost 1/2 z^T H z - f^T z  with H diagonal.
    Eigen::VectorXd h_diag(nz);
    h_diag.head(nu).setConstant(2.0);
    for (int r = 0; r < nr; ++r) {
        h_diag(nu + r) = 2.0 * (p.rows[r].relaxable ? p.slack_penalty : kHardPenalty);
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nz);
    f.head(nu) = 2.0 * p.u_ref;

    std::vector<DenseRow> cons;
    for (int r = 0; r < nr; ++r) {
        DenseRow row;
        row.a = Eigen::VectorXd::Zero(nz);
        for (const auto& [robot, block] : p.rows[r].coeffs) {
            row.a.segment<2>(2 * robot) = block;
        }
        row.a(nu + r) = 1.0;
        row.b = p.rows[r].rhs;
        row.source_row = static_cast<std::size_t>(r);
        cons.push_back(std::move(row));
    }
    // Slack nonnegativity.
    for (int r = 0; r < nr; ++r) {
        DenseRow row;
        row.a = Eigen::VectorXd::Zero(nz);
        row.a(nu + r) = 1.0;
        row.b = 0.0;
        cons.push_back(std::move(row));
    }
    // Inscribed per-coordinate box |u_i[k]| <= alpha_i / sqrt(dim).
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(p.dim));
    for (int i = 0; i < p.n_robots; ++i) {
        const double beta = p.alpha.at(i) * inv_sqrt_d;
        for (int k = 0; k < p.dim; ++k) {
            for (double sign : {1.0, -1.0}) {
                DenseRow row;
                row.a = Eigen::VectorXd::Zero(nz);
                row.a(p.dim * i + k) = sign;
                row.b = -beta;
                cons.push_back(std::move(row));
            }
        }
    }

    const int nc = static_cast<int>(cons.size());
    const Eigen::VectorXd hinv = h_diag.cwiseInverse();

    // Feasible start: clamp u_ref into the box, open each slack just enough.
    Eigen::VectorXd z = Eigen::VectorXd::Zero(nz);
    for (int i = 0; i < p.n_robots; ++i) {
        const double beta = p.alpha.at(i) * inv_sqrt_d;
        for (int k = 0; k < p.dim; ++k) {
            z(p.dim * i + k) = std::clamp(p.u_ref(p.dim * i + k), -beta, beta);
        }
    }
    for (int r = 0; r < nr; ++r) {
        z(nu + r) = std::max(0.0, cons[r].b - cons[r].a.head(nu).dot(z.head(nu)));
    }

    // Primal active-set method with step-length control. The iterate stays
    // feasible throughout, and any blocking constraint has a.d < 0 while the
    // working set satisfies a.d = 0, so working-set gradients stay linearly
    // independent and the Schur complement stays positive definite.
    std::vector<int> working;  // indices into cons
    Eigen::VectorXd lambda;
    bool converged = false;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        // Solve the equality-constrained subproblem for the target point and
        // step toward it, so roundoff drift off the working manifold is
        // corrected rather than carried along.
        Eigen::VectorXd target;
        const int m = static_cast<int>(working.size());
        if (m == 0) {
            target = hinv.cwiseProduct(f);
            lambda.resize(0);
        } else {
            Eigen::MatrixXd aw(m, nz);
            Eigen::VectorXd bw(m);
            for (int k = 0; k < m; ++k) {
                aw.row(k) = cons[working[k]].a;
                bw(k) = cons[working[k]].b;
            }
            const Eigen::MatrixXd ah = aw * hinv.asDiagonal();
            const auto factor = numerics::cholesky(ah * aw.transpose());
            lambda = numerics::chol_solve(factor, bw - ah * f);
            target = hinv.cwiseProduct(f + aw.transpose() * lambda);
        }
        const Eigen::VectorXd d = target - z;

        // Longest step along d that keeps every constraint satisfied.
        double t = 1.0;
        int blocking = -1;
        for (int c = 0; c < nc; ++c) {
            if (std::find(working.begin(), working.end(), c) != working.end()) {
                continue;
            }
            const double ad = cons[c].a.dot(d);
            if (ad >= -1e-13) {
                continue;
            }
            const double tc = std::max(0.0, (cons[c].b - cons[c].a.dot(z)) / ad);
            if (tc < t) {
                t = tc;
                blocking = c;
            }
        }
        z += t * d;
        if (blocking >= 0 && t < 1.0) {
            working.push_back(blocking);
            continue;
        }

        // Full step taken: z is now the minimizer over the working set, with
        // multipliers lambda. Optimal unless one is negative, in which case
        // that constraint leaves the set.
        int drop = -1;
        double most_negative = -kKktTol;
        for (int k = 0; k < m; ++k) {
            if (lambda(k) < most_negative) {
                most_negative = lambda(k);
                drop = k;
            }
        }
        if (drop < 0) {
            converged = true;
            break;
        }
        working.erase(working.begin() + drop);
    }

    QpSolution sol;
    sol.u = z.head(nu);
    double hard_slack = 0.0;
    for (int r = 0; r < nr; ++r) {
        if (p.rows[r].relaxable) {
            sol.slacks[static_cast<std::size_t>(r)] = std::max(z(nu + r), 0.0);
        } else {
            hard_slack = std::max(hard_slack, z(nu + r));
        }
    }
    for (int w : working) {
        if (cons[w].source_row != SIZE_MAX) {
            sol.active_set.push_back(cons[w].source_row);
        }
    }
    std::sort(sol.active_set.begin(), sol.active_set.end());

    if (hard_slack > kHardFeasTol) {
        sol.status = QpStatus::Infeasible;
        return sol;
    }
    if (!converged) {
        throw IterationLimit("solve: active-set iteration limit reached");
    }

    // The penalty formulation leaves micro-slacks ~lambda / (2 * penalty) on
    // active rows; only slacks above that scale mean a row actually yielded.
    bool relaxed = false;
    for (const auto& [row, s] : sol.slacks) {
        if (s > 1e-5) {
            relaxed = true;
        }
    }
    sol.status = relaxed ? QpStatus::Relaxed : QpStatus::Optimal;
    return sol;
}

StepOutput dcm_step(const JointState& x, const Eigen::VectorXd& u_ref, ModelStore& models,
                    const FieldSpec& field, const ObstacleSet& obs,
                    const std::vector<double>& alpha, const DcmParams& params) {
    const int n = static_cast<int>(x.size());
    StepOutput out;

    // Phase 1: collect RSSI and admit admissible measurements.
    out.rssi_matrix = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            out.rssi_matrix(i, j) = rssi(field, i, x[i], j, x[j]);
            auto sample = try_measure(field, i, x[i], j, x[j], params.psi, params.epsilon);
            if (sample) {
                auto it = models.find({i, j});
                const GpModel* existing = (it == models.end()) ? nullptr : &it->second;
                models[{i, j}] =
                    GpModel::admit(existing, params.hyper, *sample, params.dedup_res, params.cap);
            }
        }
    }

    // Phase 2: strong graph and Eq.-style violation weights under u_ref.
    out.graph = build_graph(out.rssi_matrix, params.epsilon);
    if (!is_strongly_connected(out.graph)) {
        throw DisconnectedAtEntry("dcm_step: strong communication graph is disconnected");
    }
    for (const auto& e : out.graph.edges) {
        const auto& [i, j] = e;
        const GpEval ev_ij = models.at({i, j}).evaluate(x[i], x[j]);
        const GpEval ev_ji = models.at({j, i}).evaluate(x[j], x[i]);
        const double hdot_ij = ev_ij.grad_tx.dot(u_ref.segment<2>(2 * i)) +
                               ev_ij.grad_rx.dot(u_ref.segment<2>(2 * j));
        const double hdot_ji = ev_ji.grad_tx.dot(u_ref.segment<2>(2 * j)) +
                               ev_ji.grad_rx.dot(u_ref.segment<2>(2 * i));
        out.graph.weights[e] = edge_weight(ev_ij, ev_ji, hdot_ij, hdot_ji, params.gamma);
    }

    // Phase 3: minimally disruptive spanning tree.
    out.tree = min_spanning_tree(out.graph);

    // Phase 4: rows and QP.
    QpProblem qp;
    qp.n_robots = n;
    qp.dim = 2;
    qp.u_ref = u_ref;
    qp.alpha = alpha;
    qp.slack_penalty = params.slack_penalty;
    qp.rows = safety_rows(x, params.r_s, params.gamma);
    auto orows = obstacle_rows(x, obs, params.gamma);
    qp.rows.insert(qp.rows.end(), orows.begin(), orows.end());
    auto crows = connectivity_rows(models, x, out.tree, params.gamma);
    qp.rows.insert(qp.rows.end(), crows.begin(), crows.end());
    out.qp = solve(qp);
    return out;
}

}  // namespace dcm
