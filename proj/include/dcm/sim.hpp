#ifndef DCM_SIM_HPP
#define DCM_SIM_HPP

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "dcm/controller.hpp"

namespace dcm {

struct RobotSpec {
    Vec2 start = Vec2::Zero();
    Vec2 goal = Vec2::Zero();
    double alpha = 0.5;  // m/s
};

struct DcmController {};
struct MccstController {
    double r_c = 0.7;  // m
};
using ControllerChoice = std::variant<DcmController, MccstController>;

struct Scenario {
    std::vector<RobotSpec> robots;
    ObstacleSet obstacles;
    FieldSpec field;
    double psi = -30.0;
    double epsilon = -25.0;
    double gamma = 1.0;
    double r_s = 0.28;
    double dt = 0.05;
    int steps = 700;
    ControllerChoice controller = DcmController{};
    GpHyper gp_hyper;
    double dedup_res = 0.05;
    std::size_t cap = 400;
    double slack_penalty = 1e6;
    std::uint64_t seed = 0;
};

struct StepRecord {
    int t = 0;
    JointState x;
    Eigen::VectorXd u_ref;
    Eigen::VectorXd u_star;
    double min_dist = 0.0;       // min over robot-robot and robot-obstacle
    double lambda2 = 0.0;        // of the true strong-edge adjacency
    double perturbation = 0.0;   // (1/N) sum ||u_i* - u_i^ref||^2
    std::vector<Edge> tree_edges;
    bool relaxed = false;
    bool infeasible = false;
    std::vector<std::size_t> dataset_sizes;  // per ordered pair, row-major, i != j
};

struct RunSummary {
    double min_min_dist = 0.0;
    double min_lambda2 = 0.0;
    double mean_perturbation = 0.0;
    double std_perturbation = 0.0;
    std::vector<double> goal_distances;  // final distance to goal, per robot
    int relaxation_count = 0;
    int infeasible_count = 0;
    int steps = 0;
};

/// Proportional goal-seeking reference, clipped to per-robot speed bounds.
Eigen::VectorXd nominal_controller(const JointState& x, const std::vector<Vec2>& goals,
                                   const std::vector<double>& alpha, double k_p = 1.0);

/// One step of the distance-disc baseline: identical MST + QP pipeline with
/// h_c = r_c^2 - |x_i - x_j|^2 in place of the learned barrier.
StepOutput mccst_step(const JointState& x, const Eigen::VectorXd& u_ref, double r_c,
                      const FieldSpec& field, const ObstacleSet& obs,
                      const std::vector<double>& alpha, const DcmParams& params);

/// Validates the scenario invariants (initial strong connectivity, initial
/// separation), then integrates with explicit Euler at fixed dt. Halts early
/// with a terminal record if the QP reports Infeasible. When final_models is
/// non-null it receives the GP model store at the end of the run.
std::vector<StepRecord> run(const Scenario& s, ModelStore* final_models = nullptr);

RunSummary summarize(const Scenario& s, const std::vector<StepRecord>& records);

/// Ring-start / spread-goal scenario generator used by the sweep command and
/// the acceptance suite. Spacings are the distance between ring neighbours.
Scenario make_ring_scenario(int n_robots, std::uint64_t seed, double start_spacing = 0.6,
                            double goal_spacing = 0.9);

}  // namespace dcm

#endif
