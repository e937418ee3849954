#include "dcm/rssi_field.hpp"

#include <cmath>

namespace dcm {

namespace {

// splitmix64; counter-based so field queries are order independent.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double uniform(std::uint64_t h, double lo, double hi) {
    return lo + (hi - lo) * uniform01(h);
}

// Sum of the transmitter's shadowing bumps evaluated at the receiver position.
double shadowing(const FieldSpec& spec, int tx_id, const Vec2& rx_pos) {
    double s = 0.0;
    const double inv2l2 = 1.0 / (2.0 * spec.bump_len * spec.bump_len);
    for (int b = 0; b < spec.n_bumps; ++b) {
        const auto k = static_cast<std::uint64_t>(b);
        const double cx = uniform(key(spec.seed, tx_id, k, 1), spec.arena.x_min, spec.arena.x_max);
        const double cy = uniform(key(spec.seed, tx_id, k, 2), spec.arena.y_min, spec.arena.y_max);
        const double amp = uniform(key(spec.seed, tx_id, k, 3), -spec.bump_amp, spec.bump_amp);
        const double dx = rx_pos.x() - cx;
        const double dy = rx_pos.y() - cy;
        s += amp * std::exp(-(dx * dx + dy * dy) * inv2l2);
    }
    return s;
}

double pair_gain(const FieldSpec& spec, int tx_id, int rx_id) {
    if (spec.asym_gain_range == 0.0) {
        return 0.0;
    }
    return uniform(key(spec.seed ^ 0x51ed270b0a1ULL, tx_id, rx_id, 7),
                   -spec.asym_gain_range, spec.asym_gain_range);
}

}  // namespace

double rssi(const FieldSpec& spec, int tx_id, const Vec2& tx_pos, int rx_id, const Vec2& rx_pos) {
    const double dist = std::max((tx_pos - rx_pos).norm(), 0.01);
    double r = spec.p0 - 10.0 * spec.path_loss_exp * std::log10(dist);
    r += shadowing(spec, tx_id, rx_pos);
    r += pair_gain(spec, tx_id, rx_id);
    return std::clamp(r, spec.floor_db, 0.0);
}

std::optional<PairSample> try_measure(const FieldSpec& spec, int tx_id, const Vec2& tx_pos,
                                      int rx_id, const Vec2& rx_pos, double psi, double epsilon) {
    if (tx_id == rx_id) {
        throw SamePair("try_measure: transmitter and receiver ids must differ");
    }
    const double r = rssi(spec, tx_id, tx_pos, rx_id, rx_pos);
    if (r < psi) {
        return std::nullopt;
    }
    return PairSample{tx_pos, rx_pos, r - epsilon};
}

}  // namespace dcm
