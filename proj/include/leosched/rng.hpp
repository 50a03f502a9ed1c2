#ifndef LEOSCHED_RNG_HPP
#define LEOSCHED_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace leosched::rng {

// SplitMix64 finalizer, used to whiten seeds before they reach the engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Child seed for a named concern ("workload", "adversary", "policy", ...).
// Streams derived from different labels never share state, so e.g. changing
// the adversary intensity cannot perturb task generation.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view label) {
    return splitmix64(master ^ fnv1a64(label));
}

// Indexed child seed (per episode, per sweep cell, ...).
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
    return splitmix64(substream_seed(master, label) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Deterministic random stream. mt19937_64 output is fully specified by the
// standard and all samplers below are implemented here, so sequences are
// bit-identical across platforms and standard libraries.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("rng: below(0)");
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t x = gen_();
            if (x >= threshold) return x % n;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Poisson draw. Sequential-search inversion for small means (one uniform
    // per draw, monotone in the mean for a fixed uniform, which the harness
    // relies on for paired sweeps), Hormann's PTRS transformed rejection for
    // large means.
    std::int64_t poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean)) throw std::invalid_argument("rng: poisson mean out of range");
        if (mean <= 30.0) return poisson_inversion(mean);
        return poisson_ptrs(mean);
    }

private:
    std::int64_t poisson_inversion(double mean) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::int64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (k > 4000) break; // unreachable for mean <= 30
        }
        return k;
    }

    // W. Hormann, "The transformed rejection method for generating Poisson
    // random variables" (PTRS). Valid for mean >= 10.
    std::int64_t poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = uniform() - 0.5;
            const double v = uniform();
            const double us = 0.5 - std::fabs(u);
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                k * loglam - mean - std::lgamma(k + 1.0)) {
                return static_cast<std::int64_t>(k);
            }
        }
    }

    std::mt19937_64 gen_;
};

} // namespace leosched::rng

#endif
