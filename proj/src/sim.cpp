#include "dcm/sim.hpp"

#include <cmath>
#include <numbers>

namespace dcm {

namespace {

double min_separation(const JointState& x, const ObstacleSet& obs) {
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            best = std::min(best, (x[i] - x[j]).norm());
        }
        for (const auto& p : obs.points) {
            best = std::min(best, (x[i] - p).norm());
        }
    }
    return best;
}

Eigen::MatrixXd strong_adjacency(const Eigen::MatrixXd& rssi_matrix, double epsilon) {
    const Eigen::Index n = rssi_matrix.rows();
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::min(rssi_matrix(i, j), rssi_matrix(j, i)) >= epsilon) {
                adj(i, j) = adj(j, i) = 1.0;
            }
        }
    }
    return adj;
}

Eigen::MatrixXd field_rssi_matrix(const FieldSpec& field, const JointState& x) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                m(i, j) = rssi(field, i, x[i], j, x[j]);
            }
        }
    }
    return m;
}

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

Eigen::VectorXd nominal_controller(const JointState& x, const std::vector<Vec2>& goals,
                                   const std::vector<double>& alpha, double k_p) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
        Vec2 v = k_p * (goals[i] - x[i]);
        const double speed = v.norm();
        if (speed > alpha[i]) {
            v *= alpha[i] / speed;
        }
        u.segment<2>(2 * i) = v;
    }
    return u;
}

StepOutput mccst_step(const JointState& x, const Eigen::VectorXd& u_ref, double r_c,
                      const FieldSpec& field, const ObstacleSet& obs,
                      const std::vector<double>& alpha, const DcmParams& params) {
    const int n = static_cast<int>(x.size());
    StepOutput out;
    out.rssi_matrix = field_rssi_matrix(field, x);

    // Distance-disc graph: edge iff ||x_i - x_j|| <= r_c, with a hysteresis
    // band covering one explicit-Euler step of tangential overshoot. While a
    // tree edge rides the disc boundary the barrier only bounds the radial
    // rate, so d can exceed r_c by O((2*alpha*dt)^2) for a step before the
    // constraint pushes it back; dropping the edge for that jitter would
    // declare a maintained link dead.
    constexpr double kDiscSlack = 0.01;
    out.graph.n = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if ((x[i] - x[j]).norm() <= r_c + kDiscSlack) {
                out.graph.edges.emplace_back(i, j);
            }
        }
    }
    if (!is_strongly_connected(out.graph)) {
        throw DisconnectedAtEntry("mccst_step: distance-disc graph is disconnected");
    }

    for (const auto& e : out.graph.edges) {
        const auto& [i, j] = e;
        const Vec2 delta = x[i] - x[j];
        const double h = r_c * r_c - delta.squaredNorm();
        const double hdot =
            -2.0 * delta.dot(u_ref.segment<2>(2 * i) - u_ref.segment<2>(2 * j));
        out.graph.weights[e] = -2.0 * (hdot + params.gamma * h);
    }
    out.tree = min_spanning_tree(out.graph);

    QpProblem qp;
    qp.n_robots = n;
    qp.dim = 2;
    qp.u_ref = u_ref;
    qp.alpha = alpha;
    qp.slack_penalty = params.slack_penalty;
    qp.rows = safety_rows(x, params.r_s, params.gamma);
    auto orows = obstacle_rows(x, obs, params.gamma);
    qp.rows.insert(qp.rows.end(), orows.begin(), orows.end());
    for (const auto& [i, j] : out.tree.tree_edges) {
        // Both directions of the distance barrier coincide; one row suffices.
        const Vec2 delta = x[i] - x[j];
        ConstraintRow row;
        row.coeffs[i] = -2.0 * delta;
        row.coeffs[j] = 2.0 * delta;
        row.rhs = -params.gamma * (r_c * r_c - delta.squaredNorm());
        row.origin = RowOrigin::ConnTx;
        row.a = i;
        row.b = j;
        row.relaxable = true;
        qp.rows.push_back(std::move(row));
    }
    out.qp = solve(qp);
    return out;
}

std::vector<StepRecord> run(const Scenario& s, ModelStore* final_models) {
    const int n = static_cast<int>(s.robots.size());
    JointState x;
    std::vector<Vec2> goals;
    std::vector<double> alpha;
    for (const auto& r : s.robots) {
        x.push_back(r.start);
        goals.push_back(r.goal);
        alpha.push_back(r.alpha);
    }

    DcmParams params;
    params.psi = s.psi;
    params.epsilon = s.epsilon;
    params.gamma = s.gamma;
    params.r_s = s.r_s;
    params.slack_penalty = s.slack_penalty;
    params.hyper = s.gp_hyper;
    params.dedup_res = s.dedup_res;
    params.cap = s.cap;

    // Scenario invariants: strongly connected and collision-free at start.
    {
        const auto g0 = build_graph(field_rssi_matrix(s.field, x), s.epsilon);
        if (!is_strongly_connected(g0)) {
            throw DisconnectedAtEntry("run: initial configuration is not strongly connected");
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if ((x[i] - x[j]).norm() <= s.r_s) {
                    throw Disconnected("run: robots start within the safety radius");
                }
            }
            for (const auto& p : s.obstacles.points) {
                if ((x[i] - p).norm() <= s.obstacles.r_obs) {
                    throw Disconnected("run: robot starts inside an obstacle");
                }
            }
        }
    }

    ModelStore models;
    std::vector<StepRecord> records;
    records.reserve(s.steps);

    for (int t = 0; t < s.steps; ++t) {
        const Eigen::VectorXd u_ref = nominal_controller(x, goals, alpha, 1.0);
        StepOutput step;
        if (std::holds_alternative<DcmController>(s.controller)) {
            step = dcm_step(x, u_ref, models, s.field, s.obstacles, alpha, params);
        } else {
            const double r_c = std::get<MccstController>(s.controller).r_c;
            step = mccst_step(x, u_ref, r_c, s.field, s.obstacles, alpha, params);
        }

        StepRecord rec;
        rec.t = t;
        rec.x = x;
        rec.u_ref = u_ref;
        rec.min_dist = min_separation(x, s.obstacles);
        rec.lambda2 =
            (n >= 2) ? algebraic_connectivity(strong_adjacency(step.rssi_matrix, s.epsilon)) : 0.0;
        rec.tree_edges = step.tree.tree_edges;
        rec.relaxed = (step.qp.status == QpStatus::Relaxed);
        rec.infeasible = (step.qp.status == QpStatus::Infeasible);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    continue;
                }
                auto it = models.find({i, j});
                rec.dataset_sizes.push_back(it == models.end() ? 0 : it->second.samples().size());
            }
        }

        if (rec.infeasible) {
            rec.u_star = Eigen::VectorXd::Zero(2 * n);
            rec.perturbation = u_ref.squaredNorm() / n;
            records.push_back(std::move(rec));
            break;  // terminal record
        }

        rec.u_star = step.qp.u;
        double pert = 0.0;
        for (int i = 0; i < n; ++i) {
            pert += (rec.u_star.segment<2>(2 * i) - u_ref.segment<2>(2 * i)).squaredNorm();
        }
        rec.perturbation = pert / n;
        records.push_back(rec);

        for (int i = 0; i < n; ++i) {
            x[i] += s.dt * rec.u_star.segment<2>(2 * i);
        }
    }
    if (final_models != nullptr) {
        *final_models = std::move(models);
    }
    return records;
}

RunSummary summarize(const Scenario& s, const std::vector<StepRecord>& records) {
    if (records.empty()) {
        throw EmptyRun("summarize: no records");
    }
    RunSummary out;
    out.steps = static_cast<int>(records.size());
    out.min_min_dist = std::numeric_limits<double>::infinity();
    out.min_lambda2 = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : records) {
        out.min_min_dist = std::min(out.min_min_dist, r.min_dist);
        out.min_lambda2 = std::min(out.min_lambda2, r.lambda2);
        sum += r.perturbation;
        sum_sq += r.perturbation * r.perturbation;
        out.relaxation_count += r.relaxed ? 1 : 0;
        out.infeasible_count += r.infeasible ? 1 : 0;
    }
    const double mean = sum / out.steps;
    out.mean_perturbation = mean;
    out.std_perturbation = std::sqrt(std::max(0.0, sum_sq / out.steps - mean * mean));

    const auto& last = records.back();
    const int n = static_cast<int>(s.robots.size());
    for (int i = 0; i < n; ++i) {
        const Vec2 final_pos = last.x[i] + s.dt * last.u_star.segment<2>(2 * i);
        out.goal_distances.push_back((final_pos - s.robots[i].goal).norm());
    }
    return out;
}

Scenario make_ring_scenario(int n_robots, std::uint64_t seed, double start_spacing,
                            double goal_spacing) {
    Scenario s;
    s.seed = seed;
    const double half_angle = std::numbers::pi / n_robots;
    const double r_start = start_spacing / (2.0 * std::sin(half_angle));
    const double r_goal = goal_spacing / (2.0 * std::sin(half_angle));
    const double phase = 2.0 * std::numbers::pi * unit(mix(seed ^ 0xabcdef12ULL));

    for (int i = 0; i < n_robots; ++i) {
        const double th = phase + 2.0 * std::numbers::pi * i / n_robots;
        const double jx = 0.04 * (unit(mix(seed * 31 + i * 2 + 1)) - 0.5);
        const double jy = 0.04 * (unit(mix(seed * 31 + i * 2 + 2)) - 0.5);
        RobotSpec r;
        r.start = Vec2(r_start * std::cos(th), r_start * std::sin(th));
        r.goal = Vec2(r_goal * std::cos(th) + jx, r_goal * std::sin(th) + jy);
        r.alpha = 0.5;
        s.robots.push_back(r);
    }

    // Two obstacle points between the start ring and the goal ring, placed
    // off the radial robot paths.
    const double r_mid = 0.5 * (r_start + r_goal);
    // Angles (2k-1) * half_angle sit midway between adjacent radial spokes
    // regardless of parity of n.
    for (double off : {phase + half_angle, phase + 3.0 * half_angle}) {
        s.obstacles.points.push_back(Vec2(r_mid * std::cos(off), r_mid * std::sin(off)));
    }
    s.obstacles.r_obs = 0.28;

    s.field.seed = seed;
    s.field.p0 = -18.0;
    s.field.path_loss_exp = 4.0;
    s.field.n_bumps = 3;
    s.field.bump_amp = 3.0;
    s.field.bump_len = 1.5;
    s.field.asym_gain_range = 1.0;
    const double extent = r_goal + 2.0;
    s.field.arena = Arena{-extent, extent, -extent, extent};

    s.steps = 400;
    if (n_robots > 5) {
        s.dedup_res = 0.1;
        s.cap = 150;
    } else {
        s.cap = 300;
    }
    return s;
}

}  // namespace dcm
