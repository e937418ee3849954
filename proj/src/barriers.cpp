#include "dcm/barriers.hpp"

namespace dcm {

double ConstraintRow::dot(const Eigen::VectorXd& u_stacked) const {
    double v = 0.0;
    for (const auto& [robot, block] : coeffs) {
        v += block.dot(u_stacked.segment<2>(2 * robot));
    }
    return v;
}

std::string ConstraintRow::label() const {
    switch (origin) {
        case RowOrigin::Safety:
            return "safety(" + std::to_string(a) + "," + std::to_string(b) + ")";
        case RowOrigin::Obstacle:
            return "obstacle(" + std::to_string(a) + "," + std::to_string(b) + ")";
        case RowOrigin::ConnTx:
            return "conn(" + std::to_string(a) + "->" + std::to_string(b) + ")";
        case RowOrigin::ConnRx:
            return "conn(" + std::to_string(a) + "->" + std::to_string(b) + ")";
    }
    return "?";
}

std::vector<ConstraintRow> safety_rows(const JointState& x, double r_s, double gamma) {
    std::vector<ConstraintRow> rows;
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec2 delta = x[i] - x[j];
            ConstraintRow row;
            row.coeffs[i] = 2.0 * delta;
            row.coeffs[j] = -2.0 * delta;
            row.rhs = -gamma * (delta.squaredNorm() - r_s * r_s);
            row.origin = RowOrigin::Safety;
            row.a = i;
            row.b = j;
            row.relaxable = false;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<ConstraintRow> obstacle_rows(const JointState& x, const ObstacleSet& obs, double gamma,
                                         double activation_margin) {
    std::vector<ConstraintRow> rows;
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        for (int o = 0; o < static_cast<int>(obs.points.size()); ++o) {
            const Vec2 delta = x[i] - obs.points[o];
            if (delta.norm() > obs.r_obs + activation_margin) {
                continue;
            }
            ConstraintRow row;
            row.coeffs[i] = 2.0 * delta;
            row.rhs = -gamma * (delta.squaredNorm() - obs.r_obs * obs.r_obs);
            row.origin = RowOrigin::Obstacle;
            row.a = i;
            row.b = o;
            row.relaxable = false;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<ConstraintRow> connectivity_rows(const ModelStore& models, const JointState& x,
                                             const SpanningTree& tree, double gamma) {
    std::vector<ConstraintRow> rows;
    for (const auto& [i, j] : tree.tree_edges) {
        for (const auto& [tx, rx] : {std::pair{i, j}, std::pair{j, i}}) {
            auto it = models.find({tx, rx});
            if (it == models.end() || !it->second.fitted()) {
                throw ModelMissing("connectivity_rows: no fitted model for direction " +
                                   std::to_string(tx) + "->" + std::to_string(rx));
            }
            const GpEval ev = it->second.evaluate(x[tx], x[rx]);
            ConstraintRow row;
            row.coeffs[tx] = ev.grad_tx;
            row.coeffs[rx] = ev.grad_rx;
            row.rhs = -gamma * ev.h;
            row.origin = (tx == i) ? RowOrigin::ConnTx : RowOrigin::ConnRx;
            row.a = tx;
            row.b = rx;
            row.relaxable = true;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace dcm
