#ifndef LEOSCHED_LINK_HPP
#define LEOSCHED_LINK_HPP

#include <cmath>
#include <span>
#include <stdexcept>

#include "leosched/math.hpp"

namespace leosched::link {

// Ka-band uplink parameters. beta0 is the channel-gain parameter on a linear
// scale (dB values are converted once at config load). range_scale multiplies
// the slant range (km) before it enters the gain formula: 1 keeps kilometers,
// 1000 switches the formula to meters.
struct LinkConfig {
    double beta0 = 1.9952623149688796e-4; // 10^(-37/10)
    double tx_power_w = 5.0;
    double noise_power_w = 1e-6;
    double bandwidth_hz = 2e7;
    double range_scale = 1.0;
};

struct LinkMetrics {
    double gain = 0.0;     // linear
    double snr = 0.0;      // linear
    double rate_bps = 0.0; // Shannon rate
    double ber = 0.0;      // BPSK bit error rate
};

// Free-space gain beta0 / s^2.
inline double path_gain(double range, double beta0) {
    if (range <= 0.0) throw std::invalid_argument("link: path_gain requires positive range");
    return beta0 / (range * range);
}

inline double snr(double gain, const LinkConfig& cfg) {
    if (gain < 0.0) throw std::invalid_argument("link: snr requires nonnegative gain");
    return cfg.tx_power_w * gain / cfg.noise_power_w;
}

inline double shannon_rate(double snr_linear, double bandwidth_hz) {
    if (snr_linear < 0.0) throw std::invalid_argument("link: shannon_rate requires nonnegative snr");
    return bandwidth_hz * std::log2(1.0 + snr_linear);
}

// BPSK bit error rate erfc(sqrt(snr))/2, in [0, 1/2].
inline double bpsk_ber(double snr_linear) {
    if (snr_linear < 0.0) throw std::invalid_argument("link: bpsk_ber requires nonnegative snr");
    return 0.5 * math::erfc(std::sqrt(snr_linear));
}

// Full channel chain for a satellite at the given slant range.
inline LinkMetrics metrics_for_range_km(double slant_range_km, const LinkConfig& cfg) {
    LinkMetrics m;
    m.gain = path_gain(slant_range_km * cfg.range_scale, cfg.beta0);
    m.snr = snr(m.gain, cfg);
    m.rate_bps = shannon_rate(m.snr, cfg.bandwidth_hz);
    m.ber = bpsk_ber(m.snr);
    return m;
}

// Probability all bits of one task survive the uplink. Local tasks never
// touch the radio and always succeed; a target outside the service cone
// fails outright. Evaluated in the log domain: (1-ber)^D underflows when
// computed directly at D ~ 1e8.
inline double task_success_prob(double ber, double data_bits, bool offloaded, bool visible) {
    if (ber < 0.0 || ber > 1.0) throw std::invalid_argument("link: ber out of [0,1]");
    if (!offloaded) return 1.0;
    if (!visible) return 0.0;
    return math::pow_one_minus(ber, data_bits);
}

// A period succeeds only if every task does: plain product, 1 when empty.
inline double period_success_prob(std::span<const double> per_task) {
    double p = 1.0;
    for (double r : per_task) {
        if (r < 0.0 || r > 1.0) throw std::invalid_argument("link: per-task probability out of [0,1]");
        p *= r;
    }
    return p;
}

} // namespace leosched::link

#endif
