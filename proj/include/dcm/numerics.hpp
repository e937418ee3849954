#ifndef DCM_NUMERICS_HPP
#define DCM_NUMERICS_HPP

#include <Eigen/Dense>

#include "dcm/errors.hpp"

namespace dcm::numerics {

/// Cholesky factor of a symmetric matrix plus the diagonal jitter that was
/// needed to make the factorization succeed.
struct CholFactor {
    Eigen::MatrixXd lower;   // lower-triangular, lower * lower^T = m + jitter * I
    double jitter_used = 0.0;

    Eigen::Index dim() const { return lower.rows(); }
};

// Jitter escalation ladder tried after the plain factorization fails.
inline constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6};

/// Factorize m (symmetric, n >= 1), escalating diagonal jitter through
/// {0, 1e-10, 1e-8, 1e-6}. Throws NotPositiveDefinite if every attempt fails.
CholFactor cholesky(const Eigen::MatrixXd& m);

/// Solve (m + jitter*I) x = b given the factor of m.
Eigen::VectorXd chol_solve(const CholFactor& f, const Eigen::VectorXd& b);

/// All eigenvalues of a symmetric matrix via cyclic Jacobi rotation sweeps,
/// sorted ascending. Converged when the off-diagonal Frobenius norm drops
/// below 1e-12 * ||m||_F; throws NoConvergence after 100 sweeps.
Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& m);

/// Second-smallest eigenvalue (n >= 2).
double second_smallest_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace dcm::numerics

#endif
