#include "dcm/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace dcm::numerics {

namespace {

bool try_factor(const Eigen::MatrixXd& m, double jitter, Eigen::MatrixXd& lower) {
    Eigen::MatrixXd work = m;
    if (jitter > 0.0) {
        work.diagonal().array() += jitter;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() != Eigen::Success) {
        return false;
    }
    lower = llt.matrixL();
    return true;
}

}  // namespace

CholFactor cholesky(const Eigen::MatrixXd& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw DimensionMismatch("cholesky: matrix must be square with n >= 1");
    }
    CholFactor f;
    if (try_factor(m, 0.0, f.lower)) {
        f.jitter_used = 0.0;
        return f;
    }
    for (double jitter : kJitterLadder) {
        if (try_factor(m, jitter, f.lower)) {
            f.jitter_used = jitter;
            return f;
        }
    }
    throw NotPositiveDefinite("cholesky: matrix not positive definite even with jitter 1e-6");
}

Eigen::VectorXd chol_solve(const CholFactor& f, const Eigen::VectorXd& b) {
    if (b.size() != f.dim()) {
        throw DimensionMismatch("chol_solve: rhs length does not match factor dimension");
    }
    Eigen::VectorXd y = f.lower.triangularView<Eigen::Lower>().solve(b);
    return f.lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw DimensionMismatch("jacobi_eigenvalues: matrix must be square");
    }
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd a = 0.5 * (m + m.transpose());
    const double norm = a.norm();
    if (n == 1) {
        return a.diagonal();
    }

    const double tol = 1e-12 * std::max(norm, 1e-300);
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                off += 2.0 * a(p, q) * a(p, q);
            }
        }
        if (std::sqrt(off) < tol) {
            Eigen::VectorXd ev = a.diagonal();
            std::sort(ev.data(), ev.data() + n);
            return ev;
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // Rotate rows/columns p and q.
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    throw NoConvergence("jacobi_eigenvalues: no convergence after 100 sweeps");
}

double second_smallest_eigenvalue(const Eigen::MatrixXd& m) {
    if (m.rows() < 2) {
        throw DimensionMismatch("second_smallest_eigenvalue: need n >= 2");
    }
    return jacobi_eigenvalues(m)(1);
}

}  // namespace dcm::numerics
