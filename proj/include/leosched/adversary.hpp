#ifndef LEOSCHED_ADVERSARY_HPP
#define LEOSCHED_ADVERSARY_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "leosched/rng.hpp"

namespace leosched::adversary {

// RIJNDAEL block lengths: 128..256 bits in 32-bit steps. Only 192/224/256 are
// assigned to tasks, but the strength model covers the whole range.
inline constexpr int kBlockMinBits = 128;
inline constexpr int kBlockMaxBits = 256;

struct AdversaryConfig {
    double mean_malicious = 3.0; // expected malicious satellites in range
    // Test hook: pins the malicious count instead of drawing it, so the
    // Bernoulli marginal of sample_attack can be checked exactly.
    std::optional<std::int64_t> forced_count;
};

// Probability a linear-strength attacker breaks a block cipher of length N:
// Pr(sigma >= N) under a uniform strength distribution on [128, 256].
inline double break_prob(int block_length_bits) {
    if (block_length_bits < kBlockMinBits || block_length_bits > kBlockMaxBits)
        throw std::invalid_argument("adversary: block length out of [128,256]");
    return static_cast<double>(kBlockMaxBits - block_length_bits) /
           static_cast<double>(kBlockMaxBits - kBlockMinBits);
}

// Probability a task survives x independent attackers: S = (1-phi)^x.
inline double security_strength(double phi, std::int64_t x) {
    if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("adversary: phi out of [0,1]");
    if (x < 0) throw std::invalid_argument("adversary: negative attacker count");
    if (x == 0) return 1.0;
    return std::pow(1.0 - phi, static_cast<double>(x));
}

// One Monte Carlo attack draw for an offloaded task: x ~ Poisson(mu) (or the
// forced hook), S = (1-phi)^x, attacked iff xi > S with xi uniform in [0,1).
// Local tasks are never attacked; callers simply do not sample for them.
inline int sample_attack(double phi, rng::Stream& stream, const AdversaryConfig& cfg) {
    std::int64_t x;
    if (cfg.forced_count) {
        x = *cfg.forced_count;
    } else {
        if (cfg.mean_malicious < 0.0) throw std::invalid_argument("adversary: negative mean");
        x = stream.poisson(cfg.mean_malicious);
    }
    const double s = security_strength(phi, x);
    const double xi = stream.uniform();
    return xi > s ? 1 : 0;
}

template <typename TaskT>
int sample_attack(const TaskT& task, rng::Stream& stream, const AdversaryConfig& cfg) {
    return sample_attack(task.break_prob, stream, cfg);
}

// E[attack indicator] over x and xi: 1 - E[(1-phi)^x] = 1 - exp(-mu*phi) for
// Poisson x. Used by the deterministic greedy candidate evaluation.
inline double expected_attack_prob(double phi, const AdversaryConfig& cfg) {
    if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("adversary: phi out of [0,1]");
    if (cfg.forced_count) return 1.0 - security_strength(phi, *cfg.forced_count);
    return 1.0 - std::exp(-cfg.mean_malicious * phi);
}

} // namespace leosched::adversary

#endif
