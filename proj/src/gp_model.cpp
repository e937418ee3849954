#include "dcm/gp_model.hpp"

#include <cmath>

namespace dcm {

double kernel(const GpHyper& hyper, const Vec4& a, const Vec4& b) {
    const double d2 = (a - b).squaredNorm();
    return hyper.sigma_f * hyper.sigma_f *
           std::exp(-d2 / (2.0 * hyper.length_scale * hyper.length_scale));
}

GpModel GpModel::fit(const GpHyper& hyper, std::vector<PairSample> samples) {
    if (samples.empty()) {
        throw EmptyDataset("GpModel::fit: no samples");
    }
    GpModel m;
    m.hyper_ = hyper;
    m.samples_ = std::move(samples);

    const auto q = static_cast<Eigen::Index>(m.samples_.size());
    Eigen::MatrixXd k(q, q);
    for (Eigen::Index i = 0; i < q; ++i) {
        const Vec4 xi = stack_pair(m.samples_[i].tx_pos, m.samples_[i].rx_pos);
        for (Eigen::Index j = i; j < q; ++j) {
            const Vec4 xj = stack_pair(m.samples_[j].tx_pos, m.samples_[j].rx_pos);
            k(i, j) = kernel(hyper, xi, xj);
            k(j, i) = k(i, j);
        }
    }
    k.diagonal().array() += hyper.noise_var;
    m.chol_ = numerics::cholesky(k);

    Eigen::VectorXd y(q);
    for (Eigen::Index i = 0; i < q; ++i) {
        y(i) = m.samples_[i].y;
    }
    m.alpha_ = numerics::chol_solve(m.chol_, y);
    return m;
}

GpEval GpModel::evaluate(const Vec2& tx_pos, const Vec2& rx_pos) const {
    if (!fitted()) {
        throw EmptyDataset("GpModel::evaluate: model not fitted");
    }
    const auto q = static_cast<Eigen::Index>(samples_.size());
    const Vec4 xs = stack_pair(tx_pos, rx_pos);

    Eigen::VectorXd ks(q);
    for (Eigen::Index i = 0; i < q; ++i) {
        ks(i) = kernel(hyper_, stack_pair(samples_[i].tx_pos, samples_[i].rx_pos), xs);
    }
    const Eigen::VectorXd kinv_ks = numerics::chol_solve(chol_, ks);

    GpEval out;
    out.mu = ks.dot(alpha_);
    out.var = kernel(hyper_, xs, xs) - ks.dot(kinv_ks);
    out.h = out.mu - out.var;

    // Row i of J is the kernel derivative (1/l^2) (X_i - X*) k_se(X_i, X*)
    // with respect to the query pair; grad h = J^T alpha + 2 J^T (K^-1 k).
    // The self-covariance term of the variance is constant for the SE
    // kernel, so its derivative drops out.
    const double inv_l2 = 1.0 / (hyper_.length_scale * hyper_.length_scale);
    Vec4 grad = Vec4::Zero();
    for (Eigen::Index i = 0; i < q; ++i) {
        const Vec4 diff = stack_pair(samples_[i].tx_pos, samples_[i].rx_pos) - xs;
        grad += (inv_l2 * (alpha_(i) + 2.0 * kinv_ks(i)) * ks(i)) * diff;
    }
    out.grad_tx = grad.head<2>();
    out.grad_rx = grad.tail<2>();
    return out;
}

namespace {

std::int64_t snap(double v, double res) {
    return static_cast<std::int64_t>(std::llround(v / res));
}

bool same_cell(const PairSample& a, const PairSample& b, double res) {
    return snap(a.tx_pos.x(), res) == snap(b.tx_pos.x(), res) &&
           snap(a.tx_pos.y(), res) == snap(b.tx_pos.y(), res) &&
           snap(a.rx_pos.x(), res) == snap(b.rx_pos.x(), res) &&
           snap(a.rx_pos.y(), res) == snap(b.rx_pos.y(), res);
}

}  // namespace

GpModel GpModel::admit(const PairSample& s, double dedup_res, std::size_t cap) const {
    return admit(this, hyper_, s, dedup_res, cap);
}

GpModel GpModel::admit(const GpModel* maybe_model, const GpHyper& hyper, const PairSample& s,
                       double dedup_res, std::size_t cap) {
    std::vector<PairSample> data;
    GpHyper h = hyper;
    if (maybe_model != nullptr && maybe_model->fitted()) {
        data = maybe_model->samples_;
        h = maybe_model->hyper_;
    }
    bool replaced = false;
    for (auto& existing : data) {
        if (same_cell(existing, s, dedup_res)) {
            existing = s;  // latest wins
            replaced = true;
            break;
        }
    }
    if (!replaced) {
        data.push_back(s);
        while (data.size() > cap) {
            data.erase(data.begin());  // FIFO eviction
        }
    }
    return fit(h, std::move(data));
}

}  // namespace dcm
