#include <doctest.h>

#include <random>

#include "dcm/controller.hpp"

using namespace dcm;

namespace {

// Exhaustive KKT enumeration oracle: tries every candidate active set of the
// augmented problem (rows + slack bounds + box), solves the equality KKT
// system, and keeps the best feasible stationary point with nonnegative
// multipliers. Independent of the iterative path in solve().
struct OracleResult {
    bool feasible = false;
    Eigen::VectorXd u;
    double objective = 0.0;
};

OracleResult kkt_enumeration(const QpProblem& p) {
    const int nu = p.n_robots * p.dim;
    std::vector<std::size_t> relaxable;
    for (std::size_t r = 0; r < p.rows.size(); ++r)
        if (p.rows[r].relaxable) relaxable.push_back(r);
    const int ns = static_cast<int>(relaxable.size());
    const int nz = nu + ns;

    Eigen::VectorXd h_diag(nz);
    h_diag.head(nu).setConstant(2.0);
    h_diag.tail(ns).setConstant(2.0 * p.slack_penalty);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nz);
    f.head(nu) = 2.0 * p.u_ref;

    std::vector<Eigen::VectorXd> a;
    std::vector<double> b;
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nz);
        for (const auto& [robot, block] : p.rows[r].coeffs)
            row.segment<2>(2 * robot) = block;
        if (p.rows[r].relaxable) {
            const auto slot =
                std::find(relaxable.begin(), relaxable.end(), r) - relaxable.begin();
            row(nu + slot) = 1.0;
        }
        a.push_back(row);
        b.push_back(p.rows[r].rhs);
    }
    for (int s = 0; s < ns; ++s) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nz);
        row(nu + s) = 1.0;
        a.push_back(row);
        b.push_back(0.0);
    }
    for (int i = 0; i < p.n_robots; ++i) {
        const double beta = p.alpha[i] / std::sqrt(2.0);
        for (int k = 0; k < 2; ++k) {
            for (double sign : {1.0, -1.0}) {
                Eigen::VectorXd row = Eigen::VectorXd::Zero(nz);
                row(2 * i + k) = sign;
                a.push_back(row);
                b.push_back(-beta);
            }
        }
    }
    const int nc = static_cast<int>(a.size());

    auto objective = [&](const Eigen::VectorXd& z) {
        return 0.5 * z.dot(h_diag.cwiseProduct(z)) - f.dot(z);
    };

    OracleResult best;
    for (unsigned mask = 0; mask < (1u << nc); ++mask) {
        const int m = __builtin_popcount(mask);
        if (m > nz) continue;
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nz + m, nz + m);
        Eigen::VectorXd rhs(nz + m);
        kkt.topLeftCorner(nz, nz) = h_diag.asDiagonal();
        rhs.head(nz) = f;
        int row_i = 0;
        for (int c = 0; c < nc; ++c) {
            if (!(mask & (1u << c))) continue;
            kkt.block(nz + row_i, 0, 1, nz) = a[c].transpose();
            kkt.block(0, nz + row_i, nz, 1) = -a[c];
            rhs(nz + row_i) = b[c];
            ++row_i;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd sol = lu.solve(rhs);
        const Eigen::VectorXd z = sol.head(nz);
        const Eigen::VectorXd lambda = sol.tail(m);
        if ((lambda.array() < -1e-8).any()) continue;
        bool feasible = true;
        for (int c = 0; c < nc; ++c)
            if (a[c].dot(z) < b[c] - 1e-8) feasible = false;
        if (!feasible) continue;
        const double obj = objective(z);
        if (!best.feasible || obj < best.objective - 1e-12) {
            best.feasible = true;
            best.objective = obj;
            best.u = z.head(nu);
        }
    }
    return best;
}

ConstraintRow make_row(int robot, const Vec2& coeff, double rhs, bool relaxable) {
    ConstraintRow r;
    r.coeffs[robot] = coeff;
    r.rhs = rhs;
    r.relaxable = relaxable;
    r.origin = relaxable ? RowOrigin::ConnTx : RowOrigin::Safety;
    return r;
}

QpProblem base_problem(int n_robots, const Eigen::VectorXd& u_ref) {
    QpProblem p;
    p.n_robots = n_robots;
    p.dim = 2;
    p.u_ref = u_ref;
    p.alpha.assign(n_robots, 1.0);
    return p;
}

}  // namespace

TEST_CASE("no rows: u_ref inside the box is returned exactly") {
    Eigen::VectorXd u_ref(2);
    u_ref << 0.3, -0.2;
    auto p = base_problem(1, u_ref);
    const auto sol = solve(p);
    CHECK(sol.status == QpStatus::Optimal);
    CHECK(sol.u == u_ref);  // exact

    // saturating reference gets clamped per coordinate
    u_ref << 5.0, -5.0;
    auto clamped = solve(base_problem(1, u_ref));
    const double beta = 1.0 / std::sqrt(2.0);
    CHECK(clamped.u(0) == doctest::Approx(beta));
    CHECK(clamped.u(1) == doctest::Approx(-beta));
}

TEST_CASE("single violated half-space: closed-form projection") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd u_ref(2);
        u_ref << u(rng), u(rng);
        const Vec2 a(u(rng) + 0.5, u(rng));
        const double b = a.dot(u_ref) + 0.1;  // violated by u_ref
        auto p = base_problem(1, u_ref);
        p.rows.push_back(make_row(0, a, b, false));
        const auto sol = solve(p);
        const Eigen::Vector2d expected =
            u_ref + a * (b - a.dot(u_ref)) / a.squaredNorm();
        if (expected.cwiseAbs().maxCoeff() < 1.0 / std::sqrt(2.0) - 1e-9) {
            CHECK((sol.u - expected).norm() < 1e-9);
            CHECK(sol.status == QpStatus::Optimal);
        }
    }
}

TEST_CASE("contradictory relaxable rows relax instead of failing") {
    Eigen::VectorXd u_ref(2);
    u_ref << 0.1, 0.0;
    auto p = base_problem(1, u_ref);
    const Vec2 a(1.0, 0.0);
    p.rows.push_back(make_row(0, a, 1.0, true));
    p.rows.push_back(make_row(0, -a, 1.0, true));
    const auto sol = solve(p);
    CHECK(sol.status == QpStatus::Relaxed);
    CHECK(sol.slacks.at(0) + sol.slacks.at(1) >= 2.0 - 1e-6);
    // moving u_x changes the two slacks in opposite directions, so the
    // quadratic slack cost pulls u to 0 rather than keeping it at u_ref
    CHECK(sol.u.norm() < 1e-6);
}

TEST_CASE("solver matches exhaustive KKT enumeration on random problems") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int done = 0;
    while (done < 60) {
        const int n_robots = 1 + static_cast<int>(rng() % 2);
        Eigen::VectorXd u_ref(2 * n_robots);
        for (int i = 0; i < u_ref.size(); ++i) u_ref(i) = 0.6 * u(rng);
        auto p = base_problem(n_robots, u_ref);
        const int n_rows = static_cast<int>(rng() % 4);
        for (int r = 0; r < n_rows; ++r) {
            ConstraintRow row;
            row.relaxable = rng() % 3 == 0;
            row.origin = row.relaxable ? RowOrigin::ConnTx : RowOrigin::Safety;
            const int touched = 1 + static_cast<int>(rng() % n_robots);
            for (int k = 0; k < touched; ++k) {
                row.coeffs[k] = Vec2(u(rng), u(rng));
            }
            row.rhs = 0.4 * u(rng);
            p.rows.push_back(row);
        }
        const auto oracle = kkt_enumeration(p);
        if (!oracle.feasible) continue;
        ++done;
        const auto sol = solve(p);
        REQUIRE(sol.status != QpStatus::Infeasible);
        CHECK((sol.u - oracle.u).norm() < 1e-6);
    }
}

TEST_CASE("box soundness: per-robot Euclidean norm never exceeds alpha") {
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd u_ref(4);
        for (int i = 0; i < 4; ++i) u_ref(i) = u(rng);
        auto p = base_problem(2, u_ref);
        p.alpha = {0.7, 1.3};
        p.rows.push_back(make_row(0, Vec2(u(rng), u(rng)), 0.2 * u(rng), false));
        const auto sol = solve(p);
        if (sol.status == QpStatus::Infeasible) continue;
        CHECK(sol.u.segment<2>(0).norm() <= 0.7 + 1e-9);
        CHECK(sol.u.segment<2>(2).norm() <= 1.3 + 1e-9);
    }
}

TEST_CASE("determinism: identical inputs give bitwise-identical solutions") {
    Eigen::VectorXd u_ref(4);
    u_ref << 0.4, -0.3, 0.2, 0.5;
    auto p = base_problem(2, u_ref);
    p.rows.push_back(make_row(0, Vec2(1.0, 0.4), 0.3, false));
    p.rows.push_back(make_row(1, Vec2(-0.5, 0.8), 0.2, true));
    const auto s1 = solve(p);
    const auto s2 = solve(p);
    CHECK(s1.u == s2.u);
    CHECK(s1.active_set == s2.active_set);
}

TEST_CASE("minimal deviation against random feasible points, KKT residual") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd u_ref(2);
    u_ref << 0.5, 0.4;
    auto p = base_problem(1, u_ref);
    p.rows.push_back(make_row(0, Vec2(1.0, 1.0), 0.2, false));
    p.rows.push_back(make_row(0, Vec2(-1.0, 0.5), -0.6, false));
    const auto sol = solve(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    const double best = (sol.u - u_ref).norm();
    const double beta = 1.0 / std::sqrt(2.0);
    int tested = 0;
    while (tested < 1000) {
        Eigen::VectorXd cand(2);
        cand << beta * u(rng), beta * u(rng);
        bool feasible = true;
        for (const auto& row : p.rows)
            if (row.dot(cand) < row.rhs) feasible = false;
        if (!feasible) continue;
        ++tested;
        CHECK(best <= (cand - u_ref).norm() + 1e-9);
    }
}

TEST_CASE("dcm_step pipeline on small teams") {
    FieldSpec field;
    field.seed = 5;
    field.p0 = -20.0;
    field.path_loss_exp = 2.0;
    DcmParams params;
    ObstacleSet obs;

    SUBCASE("interior case: constraints inactive, u* == u_ref") {
        JointState x = {Vec2(0, 0), Vec2(0.6, 0)};
        Eigen::VectorXd u_ref(4);
        u_ref << -0.02, 0.0, 0.02, 0.0;  // slow drift apart, strong signal
        ModelStore models;
        const auto out = dcm_step(x, u_ref, models, field, obs, {0.5, 0.5}, params);
        CHECK(out.qp.status == QpStatus::Optimal);
        CHECK((out.qp.u - u_ref).norm() < 1e-8);
        CHECK(out.tree.tree_edges.size() == 1);
    }

    SUBCASE("three robots in a triangle: tree has 2 edges, 4 connectivity rows") {
        JointState x = {Vec2(0, 0), Vec2(0.7, 0), Vec2(0.35, 0.6)};
        Eigen::VectorXd u_ref = Eigen::VectorXd::Zero(6);
        ModelStore models;
        const auto out = dcm_step(x, u_ref, models, field, obs, {0.5, 0.5, 0.5}, params);
        CHECK(out.graph.edges.size() == 3);
        CHECK(out.tree.tree_edges.size() == 2);
        // 6 models fitted (both directions of each pair)
        CHECK(models.size() == 6);
    }

    SUBCASE("disconnected entry throws") {
        JointState x = {Vec2(-40, 0), Vec2(40, 0)};
        Eigen::VectorXd u_ref = Eigen::VectorXd::Zero(4);
        ModelStore models;
        CHECK_THROWS_AS(dcm_step(x, u_ref, models, field, obs, {0.5, 0.5}, params),
                        DisconnectedAtEntry);
    }
}
