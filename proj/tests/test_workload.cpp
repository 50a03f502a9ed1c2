#include <catch2/catch_amalgamated.hpp>

#include "leosched/workload.hpp"

#include <cmath>

namespace workload = leosched::workload;
using workload::SecurityLevel;

TEST_CASE("block lengths per security level") {
    REQUIRE(workload::block_length_for(SecurityLevel::Low) == 192);
    REQUIRE(workload::block_length_for(SecurityLevel::Medium) == 224);
    REQUIRE(workload::block_length_for(SecurityLevel::High) == 256);
}

TEST_CASE("break probability hits the lattice points exactly") {
    leosched::rng::Stream s(1);
    workload::WorkloadConfig cfg;
    cfg.tasks_per_period = 200;
    const auto tasks = workload::generate_period(cfg, s);
    for (const auto& t : tasks) {
        switch (t.level) {
            case SecurityLevel::Low: REQUIRE(t.break_prob == 0.5); break;
            case SecurityLevel::Medium: REQUIRE(t.break_prob == 0.25); break;
            case SecurityLevel::High: REQUIRE(t.break_prob == 0.0); break;
        }
        REQUIRE(t.data_bits > 0);
    }
}

TEST_CASE("zero tasks per period yields an empty sequence") {
    leosched::rng::Stream s(1);
    workload::WorkloadConfig cfg;
    cfg.tasks_per_period = 0;
    REQUIRE(workload::generate_period(cfg, s).empty());
}

TEST_CASE("same seed, same task sequence") {
    workload::WorkloadConfig cfg;
    leosched::rng::Stream a(77), b(77);
    for (int period = 0; period < 5; ++period) {
        const auto ta = workload::generate_period(cfg, a);
        const auto tb = workload::generate_period(cfg, b);
        REQUIRE(ta.size() == tb.size());
        for (std::size_t i = 0; i < ta.size(); ++i) {
            REQUIRE(ta[i].data_bits == tb[i].data_bits);
            REQUIRE(ta[i].level == tb[i].level);
        }
    }
}

TEST_CASE("sample mean tracks the configured size over many periods") {
    // Law of large numbers on the large-mean sampler: 2e6 draws at
    // lambda = 1.6e8 put the standard error of the mean near 6e-8 relative,
    // far inside the 0.1% gate.
    workload::WorkloadConfig cfg;
    cfg.tasks_per_period = 20;
    cfg.mean_data_size_bits = 1.6e8;
    leosched::rng::Stream s(2024);
    double sum = 0.0;
    std::int64_t count = 0;
    for (int period = 0; period < 100000; ++period) {
        for (const auto& t : workload::generate_period(cfg, s)) {
            sum += static_cast<double>(t.data_bits);
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    REQUIRE(std::fabs(mean - cfg.mean_data_size_bits) / cfg.mean_data_size_bits < 1e-3);
}

TEST_CASE("level distribution follows the configured probabilities") {
    workload::WorkloadConfig cfg;
    cfg.tasks_per_period = 1;
    cfg.level_probs = {0.6, 0.3, 0.1};
    leosched::rng::Stream s(5);
    int counts[3] = {0, 0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        ++counts[static_cast<int>(workload::generate_period(cfg, s)[0].level)];
    REQUIRE(std::fabs(counts[0] / double(n) - 0.6) < 0.01);
    REQUIRE(std::fabs(counts[1] / double(n) - 0.3) < 0.01);
    REQUIRE(std::fabs(counts[2] / double(n) - 0.1) < 0.01);
}

TEST_CASE("task stream hash discriminates different streams") {
    workload::WorkloadConfig cfg;
    cfg.tasks_per_period = 5;
    leosched::rng::Stream a(1), b(2);
    const auto ha = workload::hash_tasks(0, workload::generate_period(cfg, a));
    const auto hb = workload::hash_tasks(0, workload::generate_period(cfg, b));
    REQUIRE(ha != hb);
}
