#ifndef LEOSCHED_WORKLOAD_HPP
#define LEOSCHED_WORKLOAD_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "leosched/adversary.hpp"
#include "leosched/rng.hpp"

namespace leosched::workload {

enum class SecurityLevel : int { Low = 0, Medium = 1, High = 2 };

// One security-sensitive job. Block length and break probability are fixed
// functions of the security level.
struct Task {
    int id = 0;
    std::int64_t data_bits = 0;
    SecurityLevel level = SecurityLevel::Low;
    int block_length_bits = 192;
    double break_prob = 0.5;
};

struct WorkloadConfig {
    int tasks_per_period = 20;
    double mean_data_size_bits = 1.6e8; // 20 MB (decimal) in bits
    std::array<double, 3> level_probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; // Low, Medium, High
};

inline int block_length_for(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::Low: return 192;
        case SecurityLevel::Medium: return 224;
        case SecurityLevel::High: return 256;
    }
    throw std::invalid_argument("workload: invalid security level");
}

// Draw order per task is fixed (size first, then level) so sequences are
// reproducible from the stream seed alone. Zero-size draws are rejected.
inline std::vector<Task> generate_period(const WorkloadConfig& cfg, rng::Stream& stream) {
    if (cfg.mean_data_size_bits <= 0.0)
        throw std::invalid_argument("workload: mean data size must be positive");
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(cfg.tasks_per_period > 0 ? cfg.tasks_per_period : 0));
    for (int i = 0; i < cfg.tasks_per_period; ++i) {
        Task t;
        t.id = i;
        do {
            t.data_bits = stream.poisson(cfg.mean_data_size_bits);
        } while (t.data_bits == 0);
        const double u = stream.uniform();
        const double p0 = cfg.level_probs[0];
        const double p1 = p0 + cfg.level_probs[1];
        t.level = u < p0 ? SecurityLevel::Low : (u < p1 ? SecurityLevel::Medium : SecurityLevel::High);
        t.block_length_bits = block_length_for(t.level);
        t.break_prob = adversary::break_prob(t.block_length_bits);
        tasks.push_back(t);
    }
    return tasks;
}

// Order-sensitive hash of the generated fields, used to assert that two runs
// saw the same task stream (common-random-number pairing).
inline std::uint64_t hash_tasks(std::uint64_t h, const std::vector<Task>& tasks) {
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (const Task& t : tasks) {
        mix(static_cast<std::uint64_t>(t.id));
        mix(static_cast<std::uint64_t>(t.data_bits));
        mix(static_cast<std::uint64_t>(t.level));
    }
    return h;
}

} // namespace leosched::workload

#endif
