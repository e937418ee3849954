#ifndef DCM_BARRIERS_HPP
#define DCM_BARRIERS_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "dcm/comm_graph.hpp"
#include "dcm/gp_model.hpp"

namespace dcm {

enum class RowOrigin { Safety, Obstacle, ConnTx, ConnRx };

/// One linear inequality sum_k coeffs[k] . u_k >= rhs over the stacked
/// control vector. Touches at most two robots.
struct ConstraintRow {
    std::map<int, Vec2> coeffs;
    double rhs = 0.0;
    RowOrigin origin = RowOrigin::Safety;
    int a = -1;  // first index of the origin tag (robot i)
    int b = -1;  // second index (robot j or obstacle o)
    bool relaxable = false;

    double dot(const Eigen::VectorXd& u_stacked) const;
    std::string label() const;
};

struct ObstacleSet {
    std::vector<Vec2> points;
    double r_obs = 0.28;  // m
};

using JointState = std::vector<Vec2>;

/// Pairwise collision rows: for each i < j, 2*(xi-xj).(ui-uj) >= -gamma*(|xi-xj|^2 - r_s^2).
std::vector<ConstraintRow> safety_rows(const JointState& x, double r_s, double gamma);

/// Robot-obstacle rows; rows whose robot is farther than r_obs + activation_margin
/// from the obstacle point are culled.
std::vector<ConstraintRow> obstacle_rows(const JointState& x, const ObstacleSet& obs, double gamma,
                                         double activation_margin = 1.0);

/// Keyed store of per-ordered-pair GP models.
using ModelStore = std::map<std::pair<int, int>, GpModel>;

/// Two rows per tree edge, one per direction, from the GP barrier gradient
/// under single-integrator dynamics. Throws ModelMissing if either direction
/// of a tree edge has no fitted model.
std::vector<ConstraintRow> connectivity_rows(const ModelStore& models, const JointState& x,
                                             const SpanningTree& tree, double gamma);

}  // namespace dcm

#endif
