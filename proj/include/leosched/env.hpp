#ifndef LEOSCHED_ENV_HPP
#define LEOSCHED_ENV_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/link.hpp"
#include "leosched/orbit.hpp"
#include "leosched/rng.hpp"
#include "leosched/simcore.hpp"
#include "leosched/workload.hpp"

namespace leosched::env {

struct EnvConfig {
    sim::SimConfig sim;
    workload::WorkloadConfig workload;
    int periods_per_episode = 50;
    double rho = 0.7;          // reliability threshold per period
    double rho_margin = 0.0;   // extra safety margin on the predicted product
    bool rho_penalty_mode = false; // penalize instead of masking lossy targets
    double rho_penalty_weight = 100.0;
    double obs_backlog_scale_s = 600.0;
};

// One scheduling micro-decision: destination 0 is the local device,
// 1..J is satellite d-1. A period of I tasks is realized by I micro-actions;
// the k-th choice takes position k of the offloading order.
struct MicroAction {
    int task = 0;
    int destination = 0;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool period_done = false;
    bool episode_done = false;
};

// MDP view of the simulator. Observation layout (all entries finite):
//   per task slot:      [pending, data/lambda, level one-hot(3)]      5*I
//   per satellite:      [sin g, cos g, visible, backlog/scale, ber]   5*J
//   tail:               [local backlog/scale, reliability, t norm]    3
// Backlogs shown to the agent include the service time of assignments made
// earlier in the current period, so micro-decisions can react to each other;
// execution itself always uses the exact queue state. Time is normalized by
// the episode span (periods * period duration).
class MdpEnv {
public:
    MdpEnv(EnvConfig cfg, std::uint64_t seed)
        : cfg_(std::move(cfg)),
          workload_rng_(rng::substream_seed(seed, "workload")),
          adversary_rng_(rng::substream_seed(seed, "adversary")) {
        validate_config();
        start_episode();
    }

    std::vector<double> reset(std::uint64_t seed) {
        workload_rng_ = rng::Stream(rng::substream_seed(seed, "workload"));
        adversary_rng_ = rng::Stream(rng::substream_seed(seed, "adversary"));
        workload_hash_ = 0xcbf29ce484222325ULL;
        start_episode();
        return observation();
    }

    // Restart the episode without reseeding: task randomness keeps flowing
    // from the same streams. Used between training episodes.
    std::vector<double> reset() {
        start_episode();
        return observation();
    }

    int task_count() const { return cfg_.workload.tasks_per_period; }
    int satellite_count() const { return cfg_.sim.constellation.satellite_count; }
    int action_count() const { return task_count() * (satellite_count() + 1); }
    int observation_size() const { return 5 * task_count() + 5 * satellite_count() + 3; }

    const EnvConfig& config() const { return cfg_; }
    const std::vector<workload::Task>& current_tasks() const { return tasks_; }
    const std::vector<orbit::SatelliteState>& satellites() const { return satellites_; }
    const sim::QueueState& queues() const { return queues_; }
    const sim::PeriodOutcome& last_outcome() const { return last_outcome_; }
    double now() const { return t_; }
    int period() const { return period_; }
    bool episode_done() const { return episode_done_; }
    double running_reliability() const { return running_product_; }
    std::uint64_t workload_hash() const { return workload_hash_; }

    bool satellite_visible(int sat) const {
        return orbit::is_visible(satellites_[static_cast<std::size_t>(sat)], cfg_.sim.constellation);
    }

    // Predicted uplink success probability for a task of the given size on
    // satellite `sat`, using the BER at decision time.
    double predicted_success(int sat, double data_bits) const {
        return link::task_success_prob(metrics_[static_cast<std::size_t>(sat)].ber, data_bits,
                                       true, true);
    }

    // Feasibility predicate shared by the action mask and the baseline
    // schedulers: local is always open; a satellite must be visible and, when
    // masking is active, keep the predicted reliability product at or above
    // rho plus the configured margin.
    bool destination_feasible(int task, int destination, double running_product) const {
        if (destination == 0) return true;
        const int sat = destination - 1;
        if (!satellite_visible(sat)) return false;
        if (cfg_.rho_penalty_mode) return true;
        const double r = predicted_success(
            sat, static_cast<double>(tasks_[static_cast<std::size_t>(task)].data_bits));
        return running_product * r >= cfg_.rho + cfg_.rho_margin;
    }

    // Boolean mask over the flattened task x destination grid. Entries for
    // already-scheduled tasks are all false; local stays open for every
    // pending task, so at least one action is always available.
    std::vector<std::uint8_t> action_mask() const {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(action_count()), 0);
        if (episode_done_) return mask;
        const int width = satellite_count() + 1;
        for (int i = 0; i < task_count(); ++i) {
            if (!pending_[static_cast<std::size_t>(i)]) continue;
            for (int d = 0; d < width; ++d) {
                if (destination_feasible(i, d, running_product_))
                    mask[static_cast<std::size_t>(i * width + d)] = 1;
            }
        }
        return mask;
    }

    std::vector<double> observation() const {
        std::vector<double> obs;
        obs.reserve(static_cast<std::size_t>(observation_size()));
        if (episode_done_) {
            obs.assign(static_cast<std::size_t>(observation_size()), 0.0);
            return obs;
        }
        const double lambda = cfg_.workload.mean_data_size_bits;
        for (int i = 0; i < task_count(); ++i) {
            const auto& t = tasks_[static_cast<std::size_t>(i)];
            const bool pending = pending_[static_cast<std::size_t>(i)];
            obs.push_back(pending ? 1.0 : 0.0);
            obs.push_back(pending ? static_cast<double>(t.data_bits) / lambda : 0.0);
            for (int lvl = 0; lvl < 3; ++lvl)
                obs.push_back(pending && static_cast<int>(t.level) == lvl ? 1.0 : 0.0);
        }
        const double scale = cfg_.obs_backlog_scale_s;
        for (int j = 0; j < satellite_count(); ++j) {
            const auto& s = satellites_[static_cast<std::size_t>(j)];
            const double g = orbit::deg_to_rad(s.gamma_deg);
            obs.push_back(std::sin(g));
            obs.push_back(std::cos(g));
            obs.push_back(satellite_visible(j) ? 1.0 : 0.0);
            const double backlog = std::max(0.0, queues_.satellite_release_s[static_cast<std::size_t>(j)] - t_) +
                                   tentative_sat_s_[static_cast<std::size_t>(j)];
            obs.push_back(backlog / scale);
            obs.push_back(metrics_[static_cast<std::size_t>(j)].ber);
        }
        const double local_backlog =
            std::max(0.0, queues_.local_release_s - t_) + tentative_local_s_;
        obs.push_back(local_backlog / scale);
        obs.push_back(running_product_);
        const double span = cfg_.sim.period_duration_s * cfg_.periods_per_episode;
        obs.push_back(t_ / span);
        return obs;
    }

    StepResult step(int flat_action) {
        const int width = satellite_count() + 1;
        if (flat_action < 0 || flat_action >= action_count())
            throw std::invalid_argument("env: action index out of range");
        return step(MicroAction{flat_action / width, flat_action % width});
    }

    StepResult step(const MicroAction& action) {
        if (episode_done_) throw std::logic_error("env: step after episode end");
        if (action.task < 0 || action.task >= task_count() || action.destination < 0 ||
            action.destination > satellite_count())
            throw std::invalid_argument("env: action out of range");
        if (!pending_[static_cast<std::size_t>(action.task)])
            throw std::invalid_argument("env: task " + std::to_string(action.task) +
                                        " already scheduled this period");
        if (!destination_feasible(action.task, action.destination, running_product_))
            throw std::invalid_argument("env: masked action (task " + std::to_string(action.task) +
                                        ", destination " + std::to_string(action.destination) + ")");

        pending_[static_cast<std::size_t>(action.task)] = false;
        --pending_count_;
        decision_.order.push_back(action.task);
        const double bits = static_cast<double>(tasks_[static_cast<std::size_t>(action.task)].data_bits);
        if (action.destination == 0) {
            decision_.destination[static_cast<std::size_t>(action.task)] = sim::kLocal;
            tentative_local_s_ += sim::local_compute_time(bits, cfg_.sim.compute);
        } else {
            const int sat = action.destination - 1;
            decision_.destination[static_cast<std::size_t>(action.task)] = sat;
            running_product_ *= predicted_success(sat, bits);
            tentative_sat_s_[static_cast<std::size_t>(sat)] +=
                sim::satellite_compute_time(bits, sat, cfg_.sim.compute);
        }

        if (pending_count_ > 0) return {observation(), 0.0, false, false};
        return finish_period();
    }

    // Replays a full-period decision through the micro-step interface.
    // Returns the period-final step result.
    StepResult play_decision(const sim::PeriodDecision& decision) {
        if (decision.order.size() != static_cast<std::size_t>(pending_count_))
            throw std::invalid_argument("env: decision does not cover the pending tasks");
        StepResult last;
        for (int i : decision.order) {
            const int dest = decision.destination[static_cast<std::size_t>(i)];
            last = step(MicroAction{i, dest == sim::kLocal ? 0 : dest + 1});
        }
        return last;
    }

    // Evaluates a candidate decision on a copy of the current queue state
    // without touching the environment. Expected accounting keeps the
    // evaluation deterministic; Sampled draws from the supplied stream.
    sim::PeriodOutcome evaluate_decision(const sim::PeriodDecision& decision,
                                         sim::AttackAccounting accounting,
                                         rng::Stream* stream = nullptr) const {
        auto [outcome, ignored] = sim::execute_period(tasks_, decision, queues_, satellites_, t_,
                                                      cfg_.sim, stream, accounting);
        return outcome;
    }

private:
    void validate_config() {
        const auto& c = cfg_.sim.constellation;
        if (c.satellite_count < 0) throw std::invalid_argument("env: negative satellite count");
        if (cfg_.workload.tasks_per_period < 0)
            throw std::invalid_argument("env: negative task count");
        if (cfg_.rho < 0.0 || cfg_.rho > 1.0) throw std::invalid_argument("env: rho out of [0,1]");
        if (cfg_.sim.compute.cpu_hz_sat.size() != static_cast<std::size_t>(c.satellite_count) ||
            cfg_.sim.compute.cycles_per_bit_sat.size() != static_cast<std::size_t>(c.satellite_count))
            throw std::invalid_argument("env: per-satellite compute constants must match satellite count");
    }

    void start_episode() {
        satellites_ = orbit::initial_states(cfg_.sim.constellation);
        queues_ = sim::QueueState(satellite_count());
        t_ = 0.0;
        period_ = 1;
        episode_done_ = false;
        last_outcome_ = sim::PeriodOutcome{};
        begin_period();
    }

    void begin_period() {
        tasks_ = workload::generate_period(cfg_.workload, workload_rng_);
        workload_hash_ = workload::hash_tasks(workload_hash_, tasks_);
        pending_.assign(static_cast<std::size_t>(task_count()), 1);
        pending_count_ = task_count();
        decision_.destination.assign(static_cast<std::size_t>(task_count()), sim::kLocal);
        decision_.order.clear();
        running_product_ = 1.0;
        tentative_local_s_ = 0.0;
        tentative_sat_s_.assign(static_cast<std::size_t>(satellite_count()), 0.0);
        refresh_metrics();
        if (pending_count_ == 0) {
            // Degenerate I=0 config: nothing to schedule, the period resolves
            // immediately with zero cost.
            finish_period();
        }
    }

    void refresh_metrics() {
        metrics_.clear();
        metrics_.reserve(satellites_.size());
        for (const auto& s : satellites_)
            metrics_.push_back(link::metrics_for_range_km(s.slant_range_km, cfg_.sim.link));
    }

    StepResult finish_period() {
        auto [outcome, next_queues] = sim::execute_period(
            tasks_, decision_, queues_, satellites_, t_, cfg_.sim, &adversary_rng_,
            sim::AttackAccounting::Sampled);
        queues_ = next_queues;
        last_outcome_ = outcome;

        double reward = -outcome.cost;
        if (cfg_.rho_penalty_mode && outcome.reliability < cfg_.rho)
            reward -= cfg_.rho_penalty_weight * (cfg_.rho - outcome.reliability);

        t_ += cfg_.sim.period_duration_s;
        satellites_ = orbit::advance(cfg_.sim.constellation, satellites_, cfg_.sim.period_duration_s);
        ++period_;
        if (period_ > cfg_.periods_per_episode) {
            episode_done_ = true;
            return {observation(), reward, true, true};
        }
        begin_period();
        return {observation(), reward, true, false};
    }

    EnvConfig cfg_;
    rng::Stream workload_rng_;
    rng::Stream adversary_rng_;
    std::uint64_t workload_hash_ = 0xcbf29ce484222325ULL;

    std::vector<orbit::SatelliteState> satellites_;
    std::vector<link::LinkMetrics> metrics_;
    sim::QueueState queues_{0};
    std::vector<workload::Task> tasks_;
    std::vector<std::uint8_t> pending_;
    int pending_count_ = 0;
    sim::PeriodDecision decision_;
    double running_product_ = 1.0;
    double tentative_local_s_ = 0.0;
    std::vector<double> tentative_sat_s_;
    sim::PeriodOutcome last_outcome_;
    double t_ = 0.0;
    int period_ = 1;
    bool episode_done_ = false;
};

} // namespace leosched::env

#endif
