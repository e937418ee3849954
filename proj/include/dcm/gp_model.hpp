#ifndef DCM_GP_MODEL_HPP
#define DCM_GP_MODEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dcm/numerics.hpp"
#include "dcm/rssi_field.hpp"

namespace dcm {

using Vec4 = Eigen::Vector4d;  // stacked (tx; rx) pair position

struct GpHyper {
    double sigma_f = 1.0;
    double length_scale = 0.5;  // m
    double noise_var = 1e-4;    // dB^2
};

/// Barrier evaluation at one query pair: h = mu - var plus the analytic
/// spatial gradient split into transmitter/receiver blocks.
struct GpEval {
    double h = 0.0;
    double mu = 0.0;
    double var = 0.0;
    Vec2 grad_tx = Vec2::Zero();  // dB/m
    Vec2 grad_rx = Vec2::Zero();
};

/// GP regression over transmitter-receiver position pairs for one ordered
/// robot pair. Immutable value type: fit/admit return a new model.
class GpModel {
public:
    GpModel() = default;

    /// Builds K + noise_var*I, factorizes it, precomputes alpha = K^-1 y.
    /// Throws EmptyDataset if samples is empty.
    static GpModel fit(const GpHyper& hyper, std::vector<PairSample> samples);

    /// Posterior mean/variance, barrier value h = mu - var, and the analytic
    /// gradient of h with respect to the stacked query pair.
    GpEval evaluate(const Vec2& tx_pos, const Vec2& rx_pos) const;

    /// Admit one sample: grid-snap dedup at dedup_res (latest wins within a
    /// cell), FIFO eviction beyond cap, then full refit.
    GpModel admit(const PairSample& s, double dedup_res, std::size_t cap) const;

    /// Admit into an empty or existing model (static form usable before the
    /// first sample arrives).
    static GpModel admit(const GpModel* maybe_model, const GpHyper& hyper, const PairSample& s,
                         double dedup_res, std::size_t cap);

    const std::vector<PairSample>& samples() const { return samples_; }
    const GpHyper& hyper() const { return hyper_; }
    bool fitted() const { return !samples_.empty(); }

private:
    GpHyper hyper_;
    std::vector<PairSample> samples_;
    numerics::CholFactor chol_;
    Eigen::VectorXd alpha_;
};

/// SE kernel over stacked pair positions: sigma_f^2 exp(-|a-b|^2 / (2 l^2)).
double kernel(const GpHyper& hyper, const Vec4& a, const Vec4& b);

inline Vec4 stack_pair(const Vec2& tx, const Vec2& rx) {
    Vec4 v;
    v << tx.x(), tx.y(), rx.x(), rx.y();
    return v;
}

}  // namespace dcm

#endif
