#ifndef LEOSCHED_SIMCORE_HPP
#define LEOSCHED_SIMCORE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "leosched/adversary.hpp"
#include "leosched/link.hpp"
#include "leosched/orbit.hpp"
#include "leosched/rng.hpp"
#include "leosched/workload.hpp"

namespace leosched::sim {

struct ComputeConfig {
    double cycles_per_bit_local = 80.0;   // q_local
    double cpu_hz_local = 6.5e9;          // f_local
    double cycles_per_bit_encrypt = 20.0; // q_en
    double cpu_hz_encrypt = 3e9;          // f_en
    double hardware_coefficient = 1e-31;  // k, W*s^3/cycle^3
    std::vector<double> cycles_per_bit_sat; // q_j, one entry per satellite
    std::vector<double> cpu_hz_sat;         // f_j, one entry per satellite
};

inline double local_compute_time(double data_bits, const ComputeConfig& cfg) {
    return data_bits * cfg.cycles_per_bit_local / cfg.cpu_hz_local;
}

// Total local latency: FCFS wait plus D*q/f service.
inline double local_latency(double data_bits, const ComputeConfig& cfg, double wait_s) {
    if (data_bits < 0.0) throw std::invalid_argument("sim: negative data size");
    return wait_s + local_compute_time(data_bits, cfg);
}

inline double encryption_time(double data_bits, const ComputeConfig& cfg) {
    if (data_bits < 0.0) throw std::invalid_argument("sim: negative data size");
    return data_bits * cfg.cycles_per_bit_encrypt / cfg.cpu_hz_encrypt;
}

inline double transmission_time(double data_bits, double rate_bps) {
    if (rate_bps <= 0.0) throw std::invalid_argument("sim: infeasible link (rate is zero)");
    return data_bits / rate_bps;
}

inline double satellite_compute_time(double data_bits, int sat, const ComputeConfig& cfg) {
    if (sat < 0 || static_cast<std::size_t>(sat) >= cfg.cpu_hz_sat.size())
        throw std::invalid_argument("sim: satellite index out of range");
    return data_bits * cfg.cycles_per_bit_sat[static_cast<std::size_t>(sat)] /
           cfg.cpu_hz_sat[static_cast<std::size_t>(sat)];
}

// Energy of a local job: k * f^3 * compute_time. Waiting consumes nothing.
inline double local_energy(double compute_time_s, const ComputeConfig& cfg) {
    if (compute_time_s < 0.0) throw std::invalid_argument("sim: negative compute time");
    return cfg.hardware_coefficient * cfg.cpu_hz_local * cfg.cpu_hz_local * cfg.cpu_hz_local *
           compute_time_s;
}

// Energy of an offloaded job on the GU side: encryption plus radio.
inline double offload_energy(double data_bits, double rate_bps, const ComputeConfig& cfg,
                             double tx_power_w) {
    const double t_en = encryption_time(data_bits, cfg);
    const double e_en = cfg.hardware_coefficient * cfg.cpu_hz_encrypt * cfg.cpu_hz_encrypt *
                        cfg.cpu_hz_encrypt * t_en;
    return e_en + tx_power_w * transmission_time(data_bits, rate_bps);
}

inline constexpr int kLocal = -1;

// Joint allocation and ordering for one period: destination[i] is kLocal or a
// satellite index, order[k] is the task scheduled k-th.
struct PeriodDecision {
    std::vector<int> destination;
    std::vector<int> order;
};

struct TaskOutcome {
    double start_s = 0.0; // local service start, or encryption start when offloaded
    double end_s = 0.0;
    double energy_j = 0.0;
    double attacks = 0.0; // 0/1 indicator, or an expectation in Expected mode
    double success_prob = 1.0;
    int destination = kLocal;
};

struct PeriodOutcome {
    std::vector<TaskOutcome> tasks;
    double makespan_s = 0.0;   // latest completion minus period start
    double energy_j = 0.0;     // E_total for the period
    double attacks = 0.0;      // A_total for the period
    double reliability = 1.0;  // analytic r_total
    double cost = 0.0;         // makespan + beta1*E + beta2*A
};

// Release times of every sequential resource; carried across periods so
// backlog accumulates when a period's work exceeds its duration.
struct QueueState {
    double local_release_s = 0.0;
    double crypto_release_s = 0.0;
    double uplink_release_s = 0.0;
    std::vector<double> satellite_release_s;

    explicit QueueState(int satellite_count = 0)
        : satellite_release_s(static_cast<std::size_t>(satellite_count), 0.0) {}
};

struct SimConfig {
    orbit::ConstellationConfig constellation;
    link::LinkConfig link;
    ComputeConfig compute;
    adversary::AdversaryConfig adversary;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double period_duration_s = 60.0;
};

enum class AttackAccounting { Sampled, Expected };

namespace detail {

inline void validate_decision(const std::vector<workload::Task>& tasks,
                              const PeriodDecision& decision, int satellite_count) {
    const std::size_t n = tasks.size();
    if (decision.destination.size() != n || decision.order.size() != n)
        throw std::invalid_argument("sim: decision size does not match task count");
    std::vector<char> seen(n, 0);
    for (int i : decision.order) {
        if (i < 0 || static_cast<std::size_t>(i) >= n || seen[static_cast<std::size_t>(i)])
            throw std::invalid_argument("sim: order is not a permutation of task indices");
        seen[static_cast<std::size_t>(i)] = 1;
    }
    for (int d : decision.destination) {
        if (d != kLocal && (d < 0 || d >= satellite_count))
            throw std::invalid_argument("sim: destination out of range");
    }
}

} // namespace detail

// Deterministic execution of one scheduling period.
//
// Tasks are dispatched in order O. Local tasks are all released at the period
// start and served FCFS by the local CPU. Offloaded tasks pass through three
// sequential resources: the GU crypto unit, the single GU uplink radio, and
// the target satellite's server, each FCFS in order O. The crypto unit and
// the radio are distinct hardware, so task k+1 may encrypt while task k
// transmits. The uplink rate and BER are evaluated at transmission start
// (satellites keep moving); visibility is checked at decision time, and
// assigning to an invisible satellite is a contract violation that the caller
// must have masked.
inline std::pair<PeriodOutcome, QueueState> execute_period(
    const std::vector<workload::Task>& tasks, const PeriodDecision& decision,
    const QueueState& queues, const std::vector<orbit::SatelliteState>& satellites,
    double period_start_s, const SimConfig& cfg, rng::Stream* adversary_rng,
    AttackAccounting accounting = AttackAccounting::Sampled) {
    const int sat_count = static_cast<int>(satellites.size());
    detail::validate_decision(tasks, decision, sat_count);
    if (accounting == AttackAccounting::Sampled && adversary_rng == nullptr)
        throw std::invalid_argument("sim: sampled attack accounting requires a random stream");
    if (cfg.compute.cpu_hz_sat.size() < static_cast<std::size_t>(sat_count) ||
        cfg.compute.cycles_per_bit_sat.size() < static_cast<std::size_t>(sat_count))
        throw std::invalid_argument("sim: per-satellite compute constants missing");

    QueueState next = queues;
    if (next.satellite_release_s.size() != static_cast<std::size_t>(sat_count))
        throw std::invalid_argument("sim: queue state does not match satellite count");

    PeriodOutcome out;
    out.tasks.resize(tasks.size());

    const double t0 = period_start_s;

    for (int i : decision.order) {
        const workload::Task& task = tasks[static_cast<std::size_t>(i)];
        const double bits = static_cast<double>(task.data_bits);
        TaskOutcome& res = out.tasks[static_cast<std::size_t>(i)];
        const int dest = decision.destination[static_cast<std::size_t>(i)];
        res.destination = dest;

        if (dest == kLocal) {
            const double start = std::max(next.local_release_s, t0);
            const double service = local_compute_time(bits, cfg.compute);
            res.start_s = start;
            res.end_s = start + service;
            next.local_release_s = res.end_s;
            res.energy_j = local_energy(service, cfg.compute);
            res.success_prob = 1.0;
            res.attacks = 0.0;
        } else {
            const orbit::SatelliteState& sat = satellites[static_cast<std::size_t>(dest)];
            if (!orbit::is_visible(sat, cfg.constellation))
                throw std::invalid_argument("sim: task assigned to satellite " +
                                            std::to_string(dest) + " outside the service cone");

            const double enc_start = std::max(next.crypto_release_s, t0);
            const double enc_end = enc_start + encryption_time(bits, cfg.compute);
            next.crypto_release_s = enc_end;

            const double tx_start = std::max(next.uplink_release_s, enc_end);
            const double gamma_tx =
                orbit::gamma_after(sat.gamma_deg, cfg.constellation, tx_start - t0);
            const double range_tx = orbit::slant_range(gamma_tx, cfg.constellation.earth_radius_km,
                                                       cfg.constellation.orbit_altitude_km);
            const link::LinkMetrics metrics = link::metrics_for_range_km(range_tx, cfg.link);
            const double tx_end = tx_start + transmission_time(bits, metrics.rate_bps);
            next.uplink_release_s = tx_end;

            double& sat_release = next.satellite_release_s[static_cast<std::size_t>(dest)];
            const double comp_start = std::max(sat_release, tx_end);
            const double comp_end = comp_start + satellite_compute_time(bits, dest, cfg.compute);
            sat_release = comp_end;

            res.start_s = enc_start;
            res.end_s = comp_end;
            res.energy_j = offload_energy(bits, metrics.rate_bps, cfg.compute, cfg.link.tx_power_w);
            res.success_prob = link::task_success_prob(metrics.ber, bits, true, true);
            if (accounting == AttackAccounting::Sampled) {
                res.attacks = static_cast<double>(
                    adversary::sample_attack(task.break_prob, *adversary_rng, cfg.adversary));
            } else {
                res.attacks = adversary::expected_attack_prob(task.break_prob, cfg.adversary);
            }
        }

    }

    // Totals accumulate in task-index order, not offloading order, so they do
    // not depend on the permutation through floating-point rounding.
    double latest_end = t0;
    for (const TaskOutcome& res : out.tasks) {
        latest_end = std::max(latest_end, res.end_s);
        out.energy_j += res.energy_j;
        out.attacks += res.attacks;
        out.reliability *= res.success_prob;
    }
    out.makespan_s = latest_end - t0;
    out.cost = out.makespan_s + cfg.beta1 * out.energy_j + cfg.beta2 * out.attacks;
    return {out, next};
}

} // namespace leosched::sim

#endif
