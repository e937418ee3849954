#ifndef DCM_RSSI_FIELD_HPP
#define DCM_RSSI_FIELD_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "dcm/errors.hpp"

namespace dcm {

using Vec2 = Eigen::Vector2d;

struct Arena {
    double x_min = -5.0;
    double x_max = 5.0;
    double y_min = -5.0;
    double y_max = 5.0;
};

/// Synthetic ground-truth RSSI field: log-distance path loss plus smooth
/// per-transmitter Gaussian shadowing bumps plus a fixed per-ordered-pair
/// asymmetry gain. Fully determined by (seed, ids, positions).
struct FieldSpec {
    std::uint64_t seed = 0;
    double p0 = -20.0;             // dB at 1 m
    double path_loss_exp = 2.0;
    int n_bumps = 0;
    double bump_amp = 0.0;         // dB
    double bump_len = 1.0;         // m
    double asym_gain_range = 0.0;  // dB
    double floor_db = -100.0;
    Arena arena;
};

/// One GP training row: transmitter/receiver positions and the shifted
/// observation y = R - epsilon.
struct PairSample {
    Vec2 tx_pos;
    Vec2 rx_pos;
    double y = 0.0;  // dB
};

/// Ground-truth RSSI from transmitter tx to receiver rx, clamped to
/// [floor_db, 0]. Pure and deterministic.
double rssi(const FieldSpec& spec, int tx_id, const Vec2& tx_pos, int rx_id, const Vec2& rx_pos);

/// Measurement admission: a sample is produced iff rssi >= psi (inclusive);
/// the stored observation is rssi - epsilon. Throws SamePair if tx == rx.
std::optional<PairSample> try_measure(const FieldSpec& spec, int tx_id, const Vec2& tx_pos,
                                      int rx_id, const Vec2& rx_pos, double psi, double epsilon);

}  // namespace dcm

#endif
