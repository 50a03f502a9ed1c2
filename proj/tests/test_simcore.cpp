#include <catch2/catch_amalgamated.hpp>

#include "leosched/simcore.hpp"
#include "support/event_sim.hpp"

#include <cmath>

namespace sim = leosched::sim;
namespace orbit = leosched::orbit;
namespace workload = leosched::workload;
namespace testsupport = leosched::testsupport;
using leosched::rng::Stream;

namespace {

sim::SimConfig paper_sim(int satellites) {
    sim::SimConfig cfg;
    cfg.constellation.satellite_count = satellites;
    cfg.compute.cycles_per_bit_sat.assign(static_cast<std::size_t>(satellites), 80.0);
    cfg.compute.cpu_hz_sat.assign(static_cast<std::size_t>(satellites), 1e10);
    return cfg;
}

workload::Task make_task(int id, std::int64_t bits, workload::SecurityLevel level) {
    workload::Task t;
    t.id = id;
    t.data_bits = bits;
    t.level = level;
    t.block_length_bits = workload::block_length_for(level);
    t.break_prob = leosched::adversary::break_prob(t.block_length_bits);
    return t;
}

} // namespace

TEST_CASE("latency and energy formulas match hand-computed values") {
    sim::SimConfig cfg = paper_sim(1);
    const double d = 1.6e8;
    REQUIRE(sim::local_latency(d, cfg.compute, 0.0) ==
            Catch::Approx(1.9692307692307693).epsilon(1e-9));
    REQUIRE(sim::local_latency(2.0 / (80.0 / 6.5e9), cfg.compute, 5.0) ==
            Catch::Approx(7.0).epsilon(1e-12));
    REQUIRE(sim::encryption_time(d, cfg.compute) ==
            Catch::Approx(1.0666666666666667).epsilon(1e-9));
    REQUIRE(sim::encryption_time(2.0 * d, cfg.compute) ==
            Catch::Approx(2.0 * sim::encryption_time(d, cfg.compute)).epsilon(1e-12));
    sim::ComputeConfig zero_q = cfg.compute;
    zero_q.cycles_per_bit_encrypt = 0.0;
    REQUIRE(sim::encryption_time(d, zero_q) == 0.0);

    REQUIRE(sim::transmission_time(1e6, 1e6) == 1.0);
    REQUIRE(sim::transmission_time(d, 4.76e4) == Catch::Approx(3361.3445378151261).epsilon(1e-9));
    REQUIRE_THROWS_AS(sim::transmission_time(1e6, 0.0), std::invalid_argument);

    REQUIRE(sim::satellite_compute_time(d, 0, cfg.compute) == Catch::Approx(1.28).epsilon(1e-9));
    REQUIRE(sim::satellite_compute_time(0.0, 0, cfg.compute) == 0.0);

    REQUIRE(sim::local_energy(0.0, cfg.compute) == 0.0);
    REQUIRE(sim::local_energy(1.9692307692307693, cfg.compute) ==
            Catch::Approx(0.05408).epsilon(1e-9));
    REQUIRE(sim::local_energy(2.0, cfg.compute) ==
            Catch::Approx(2.0 * sim::local_energy(1.0, cfg.compute)).epsilon(1e-12));

    // encryption part of the offload energy: k * f_en^3 * T_en
    const double rate = d / 2.0; // 2 s transmission
    const double e = sim::offload_energy(d, rate, cfg.compute, 5.0);
    REQUIRE(e - 5.0 * 2.0 == Catch::Approx(0.00288).epsilon(1e-9));
    REQUIRE(sim::offload_energy(0.0, rate, cfg.compute, 5.0) == 0.0);
}

TEST_CASE("single local task reproduces the hand trace") {
    sim::SimConfig cfg = paper_sim(1);
    std::vector<workload::Task> tasks{make_task(0, 160000000, workload::SecurityLevel::Low)};
    sim::PeriodDecision dec{{sim::kLocal}, {0}};
    sim::QueueState q(1);
    auto sats = orbit::initial_states(cfg.constellation);
    sats.resize(1);
    Stream rng(1);
    auto [out, next] = sim::execute_period(tasks, dec, q, sats, 0.0, cfg, &rng);
    REQUIRE(out.makespan_s == Catch::Approx(1.9692307692307693).epsilon(1e-9));
    REQUIRE(out.energy_j == Catch::Approx(0.05408).epsilon(1e-9));
    REQUIRE(out.attacks == 0.0);
    REQUIRE(out.reliability == 1.0);
    REQUIRE(next.local_release_s == out.makespan_s);
}

TEST_CASE("FCFS on a satellite queue") {
    // Encryption is free (q_en = 0) and the link is effectively instant, so
    // both tasks reach the satellite at the period start; service times are
    // 1 s and 2 s, completions land at t0+1 and t0+3.
    sim::SimConfig cfg = paper_sim(1);
    cfg.compute.cycles_per_bit_encrypt = 0.0;
    cfg.link.beta0 = 1e20;
    cfg.link.bandwidth_hz = 1e30; // transmission takes ~1e-23 s
    cfg.compute.cpu_hz_sat[0] = 1e9;
    cfg.compute.cycles_per_bit_sat[0] = 1.0;
    std::vector<workload::Task> tasks{make_task(0, 1000000000, workload::SecurityLevel::High),
                                      make_task(1, 2000000000, workload::SecurityLevel::High)};
    sim::PeriodDecision dec{{0, 0}, {0, 1}};
    sim::QueueState q(1);
    orbit::SatelliteState sat;
    sat.gamma_deg = 0.0;
    sat.slant_range_km = 780.0;
    const double t0 = 100.0;
    Stream rng(1);
    auto [out, next] = sim::execute_period(tasks, dec, q, {sat}, t0, cfg, &rng);
    REQUIRE(out.tasks[0].end_s == Catch::Approx(t0 + 1.0).margin(1e-6));
    REQUIRE(out.tasks[1].end_s == Catch::Approx(t0 + 3.0).margin(1e-6));
    REQUIRE(next.satellite_release_s[0] == out.tasks[1].end_s);
}

TEST_CASE("all-local periods never touch the adversary") {
    sim::SimConfig a = paper_sim(2);
    a.adversary.mean_malicious = 0.0;
    sim::SimConfig b = paper_sim(2);
    b.adversary.mean_malicious = 9.0;
    std::vector<workload::Task> tasks{make_task(0, 1000000, workload::SecurityLevel::Low),
                                      make_task(1, 2000000, workload::SecurityLevel::Medium),
                                      make_task(2, 3000000, workload::SecurityLevel::High)};
    sim::PeriodDecision dec{{sim::kLocal, sim::kLocal, sim::kLocal}, {0, 1, 2}};
    sim::QueueState q(2);
    auto sats = orbit::initial_states(a.constellation);
    sats.resize(2);
    Stream ra(7), rb(7);
    auto [ua, na] = sim::execute_period(tasks, dec, q, sats, 0.0, a, &ra);
    auto [ub, nb] = sim::execute_period(tasks, dec, q, sats, 0.0, b, &rb);
    REQUIRE(ua.attacks == 0.0);
    REQUIRE(ua.reliability == 1.0);
    REQUIRE(ua.cost == ub.cost); // bit-identical across adversary intensities
}

TEST_CASE("assignment to an invisible satellite is rejected") {
    sim::SimConfig cfg = paper_sim(1);
    std::vector<workload::Task> tasks{make_task(0, 1000, workload::SecurityLevel::Low)};
    sim::PeriodDecision dec{{0}, {0}};
    sim::QueueState q(1);
    orbit::SatelliteState sat;
    sat.gamma_deg = 12.0; // outside the 10 degree cone
    Stream rng(1);
    REQUIRE_THROWS_AS(sim::execute_period(tasks, dec, q, {sat}, 0.0, cfg, &rng),
                      std::invalid_argument);
}

TEST_CASE("decision validation") {
    sim::SimConfig cfg = paper_sim(1);
    std::vector<workload::Task> tasks{make_task(0, 1000, workload::SecurityLevel::Low),
                                      make_task(1, 1000, workload::SecurityLevel::Low)};
    sim::QueueState q(1);
    orbit::SatelliteState sat;
    Stream rng(1);
    sim::PeriodDecision bad_order{{sim::kLocal, sim::kLocal}, {0, 0}};
    REQUIRE_THROWS_AS(sim::execute_period(tasks, bad_order, q, {sat}, 0.0, cfg, &rng),
                      std::invalid_argument);
    sim::PeriodDecision bad_dest{{5, sim::kLocal}, {0, 1}};
    REQUIRE_THROWS_AS(sim::execute_period(tasks, bad_dest, q, {sat}, 0.0, cfg, &rng),
                      std::invalid_argument);
    sim::PeriodDecision ok{{sim::kLocal, sim::kLocal}, {1, 0}};
    REQUIRE_THROWS_AS(sim::execute_period(tasks, ok, q, {sat}, 0.0, cfg, nullptr),
                      std::invalid_argument);
}

TEST_CASE("cost decomposition is exact") {
    Stream s(100);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = testsupport::random_instance(s);
        auto [out, next] = sim::execute_period(inst.tasks, inst.decision, inst.queues,
                                               inst.satellites, inst.t0, inst.cfg, nullptr,
                                               sim::AttackAccounting::Expected);
        REQUIRE(out.cost == out.makespan_s + inst.cfg.beta1 * out.energy_j +
                                inst.cfg.beta2 * out.attacks);
        REQUIRE(out.reliability >= 0.0);
        REQUIRE(out.reliability <= 1.0);
    }
}

TEST_CASE("queue release times never decrease within a period") {
    Stream s(101);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = testsupport::random_instance(s);
        auto [out, next] = sim::execute_period(inst.tasks, inst.decision, inst.queues,
                                               inst.satellites, inst.t0, inst.cfg, nullptr,
                                               sim::AttackAccounting::Expected);
        REQUIRE(next.local_release_s >= inst.queues.local_release_s);
        REQUIRE(next.crypto_release_s >= inst.queues.crypto_release_s);
        REQUIRE(next.uplink_release_s >= inst.queues.uplink_release_s);
        for (std::size_t j = 0; j < next.satellite_release_s.size(); ++j)
            REQUIRE(next.satellite_release_s[j] >= inst.queues.satellite_release_s[j]);
    }
}

TEST_CASE("makespan is nondecreasing in any task size") {
    Stream s(102);
    for (int trial = 0; trial < 50; ++trial) {
        auto inst = testsupport::random_instance(s);
        auto [base, n1] = sim::execute_period(inst.tasks, inst.decision, inst.queues,
                                              inst.satellites, inst.t0, inst.cfg, nullptr,
                                              sim::AttackAccounting::Expected);
        auto grown = inst.tasks;
        const std::size_t which = s.below(grown.size());
        grown[which].data_bits *= 2;
        auto [bigger, n2] = sim::execute_period(grown, inst.decision, inst.queues,
                                                inst.satellites, inst.t0, inst.cfg, nullptr,
                                                sim::AttackAccounting::Expected);
        REQUIRE(bigger.makespan_s >= base.makespan_s);
    }
}

TEST_CASE("permuting the order of local-only tasks changes no totals") {
    Stream s(103);
    sim::SimConfig cfg = paper_sim(0);
    std::vector<workload::Task> tasks;
    for (int i = 0; i < 5; ++i)
        tasks.push_back(make_task(i, 1000000 * (i + 1), workload::SecurityLevel::Low));
    sim::PeriodDecision dec;
    dec.destination.assign(5, sim::kLocal);
    dec.order = {0, 1, 2, 3, 4};
    sim::QueueState q(0);
    auto [base, nb] = sim::execute_period(tasks, dec, q, {}, 0.0, cfg, nullptr,
                                          sim::AttackAccounting::Expected);
    for (int trial = 0; trial < 20; ++trial) {
        s.shuffle(dec.order);
        auto [out, nn] = sim::execute_period(tasks, dec, q, {}, 0.0, cfg, nullptr,
                                             sim::AttackAccounting::Expected);
        REQUIRE(out.energy_j == base.energy_j);
        REQUIRE(out.attacks == base.attacks);
        REQUIRE(out.makespan_s == Catch::Approx(base.makespan_s).epsilon(1e-12));
        REQUIRE(out.reliability == 1.0);
    }
}

TEST_CASE("completion times equal the event-list oracle exactly") {
    Stream s(104);
    for (int trial = 0; trial < 250; ++trial) {
        auto inst = testsupport::random_instance(s);
        auto [out, next] = sim::execute_period(inst.tasks, inst.decision, inst.queues,
                                               inst.satellites, inst.t0, inst.cfg, nullptr,
                                               sim::AttackAccounting::Expected);
        auto oracle = testsupport::event_list_simulate(inst.tasks, inst.decision, inst.queues,
                                                       inst.satellites, inst.t0, inst.cfg);
        for (std::size_t i = 0; i < inst.tasks.size(); ++i)
            REQUIRE(out.tasks[i].end_s == oracle.end_s[i]);
        REQUIRE(next.uplink_release_s == oracle.queues.uplink_release_s);
        REQUIRE(next.crypto_release_s == oracle.queues.crypto_release_s);
        REQUIRE(next.local_release_s == oracle.queues.local_release_s);
        for (std::size_t j = 0; j < next.satellite_release_s.size(); ++j)
            REQUIRE(next.satellite_release_s[j] == oracle.queues.satellite_release_s[j]);
    }
}
