#ifndef LEOSCHED_BASELINES_HPP
#define LEOSCHED_BASELINES_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leosched/env.hpp"
#include "leosched/rng.hpp"
#include "leosched/simcore.hpp"

namespace leosched::baselines {

enum class BaselineKind { Greedy, RoundRobin, AllLocal, AllOffloading, Random };

inline std::optional<BaselineKind> baseline_from_name(std::string_view name) {
    if (name == "greedy") return BaselineKind::Greedy;
    if (name == "round_robin") return BaselineKind::RoundRobin;
    if (name == "all_local") return BaselineKind::AllLocal;
    if (name == "all_offloading") return BaselineKind::AllOffloading;
    if (name == "random") return BaselineKind::Random;
    return std::nullopt;
}

namespace detail {

// Incremental feasibility bookkeeping while a baseline builds its decision.
// Mirrors the environment's mask exactly (same predicate), so every decision
// produced here replays through the mask without violations.
class Tracker {
public:
    explicit Tracker(const env::MdpEnv& e) : env_(e), product_(e.running_reliability()) {}

    bool feasible(int task, int destination) const {
        return env_.destination_feasible(task, destination, product_);
    }

    void commit(int task, int destination) {
        if (destination > 0) {
            const double bits =
                static_cast<double>(env_.current_tasks()[static_cast<std::size_t>(task)].data_bits);
            product_ *= env_.predicted_success(destination - 1, bits);
        }
    }

private:
    const env::MdpEnv& env_;
    double product_;
};

inline void require_fresh_period(const env::MdpEnv& e) {
    if (e.episode_done()) throw std::logic_error("baselines: episode already finished");
}

// A uniformly random feasible decision: random task order, then a uniform
// choice among the currently feasible destinations for each task.
inline sim::PeriodDecision random_feasible(const env::MdpEnv& e, rng::Stream& stream) {
    const int n = e.task_count();
    const int width = e.satellite_count() + 1;
    sim::PeriodDecision d;
    d.order.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d.order[static_cast<std::size_t>(i)] = i;
    stream.shuffle(d.order);
    d.destination.assign(static_cast<std::size_t>(n), sim::kLocal);
    Tracker tracker(e);
    std::vector<int> options;
    for (int task : d.order) {
        options.clear();
        for (int dest = 0; dest < width; ++dest)
            if (tracker.feasible(task, dest)) options.push_back(dest);
        const int pick = options[static_cast<std::size_t>(stream.below(options.size()))];
        tracker.commit(task, pick);
        d.destination[static_cast<std::size_t>(task)] = pick == 0 ? sim::kLocal : pick - 1;
    }
    return d;
}

} // namespace detail

inline sim::PeriodDecision all_local_decide(const env::MdpEnv& e) {
    detail::require_fresh_period(e);
    sim::PeriodDecision d;
    const int n = e.task_count();
    d.destination.assign(static_cast<std::size_t>(n), sim::kLocal);
    d.order.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d.order[static_cast<std::size_t>(i)] = i;
    return d;
}

// Fixed cycle Local, sat 1, ..., sat J; infeasible cycle entries are skipped
// so both the local device and every satellite get a turn when they can.
inline sim::PeriodDecision round_robin_decide(const env::MdpEnv& e) {
    detail::require_fresh_period(e);
    const int n = e.task_count();
    const int width = e.satellite_count() + 1;
    sim::PeriodDecision d;
    d.destination.assign(static_cast<std::size_t>(n), sim::kLocal);
    d.order.resize(static_cast<std::size_t>(n));
    detail::Tracker tracker(e);
    int cursor = 0;
    for (int i = 0; i < n; ++i) {
        d.order[static_cast<std::size_t>(i)] = i;
        int dest = 0;
        for (int probe = 0; probe < width; ++probe) {
            const int candidate = (cursor + probe) % width;
            if (tracker.feasible(i, candidate)) {
                dest = candidate;
                cursor = (candidate + 1) % width;
                break;
            }
        }
        tracker.commit(i, dest);
        d.destination[static_cast<std::size_t>(i)] = dest == 0 ? sim::kLocal : dest - 1;
    }
    return d;
}

// Offload everything, cycling through the visible satellites in order of
// proximity; falls back to local only when every satellite is infeasible.
inline sim::PeriodDecision all_offloading_decide(const env::MdpEnv& e) {
    detail::require_fresh_period(e);
    const int n = e.task_count();
    sim::PeriodDecision d;
    d.destination.assign(static_cast<std::size_t>(n), sim::kLocal);
    d.order.resize(static_cast<std::size_t>(n));
    std::vector<int> by_range;
    for (int j = 0; j < e.satellite_count(); ++j)
        if (e.satellite_visible(j)) by_range.push_back(j);
    std::stable_sort(by_range.begin(), by_range.end(), [&](int a, int b) {
        return e.satellites()[static_cast<std::size_t>(a)].slant_range_km <
               e.satellites()[static_cast<std::size_t>(b)].slant_range_km;
    });
    detail::Tracker tracker(e);
    std::size_t cursor = 0;
    for (int i = 0; i < n; ++i) {
        d.order[static_cast<std::size_t>(i)] = i;
        int dest = 0;
        for (std::size_t probe = 0; probe < by_range.size(); ++probe) {
            const int sat = by_range[(cursor + probe) % by_range.size()];
            if (tracker.feasible(i, sat + 1)) {
                dest = sat + 1;
                cursor = (cursor + probe + 1) % by_range.size();
                break;
            }
        }
        tracker.commit(i, dest);
        d.destination[static_cast<std::size_t>(i)] = dest == 0 ? sim::kLocal : dest - 1;
    }
    return d;
}

inline sim::PeriodDecision random_decide(const env::MdpEnv& e, rng::Stream& stream) {
    detail::require_fresh_period(e);
    return detail::random_feasible(e, stream);
}

// Best of `samples` random feasible decisions, evaluated on a clone of the
// current queue state. Candidates are scored with expected attack counts by
// default so the choice is deterministic given the stream; sampled_attacks
// switches the score to Monte Carlo draws.
inline sim::PeriodDecision greedy_decide(const env::MdpEnv& e, int samples, rng::Stream& stream,
                                         bool sampled_attacks = false) {
    detail::require_fresh_period(e);
    if (samples < 1) throw std::invalid_argument("baselines: greedy needs at least one sample");
    sim::PeriodDecision best;
    double best_cost = 0.0;
    for (int s = 0; s < samples; ++s) {
        sim::PeriodDecision cand = detail::random_feasible(e, stream);
        const sim::PeriodOutcome outcome =
            sampled_attacks
                ? e.evaluate_decision(cand, sim::AttackAccounting::Sampled, &stream)
                : e.evaluate_decision(cand, sim::AttackAccounting::Expected);
        if (s == 0 || outcome.cost < best_cost) {
            best_cost = outcome.cost;
            best = std::move(cand);
        }
    }
    return best;
}

struct DecideOptions {
    int greedy_samples = 1000;
    bool greedy_sampled_attacks = false;
};

inline sim::PeriodDecision decide(BaselineKind kind, const env::MdpEnv& e, rng::Stream& stream,
                                  const DecideOptions& opt = {}) {
    switch (kind) {
        case BaselineKind::Greedy:
            return greedy_decide(e, opt.greedy_samples, stream, opt.greedy_sampled_attacks);
        case BaselineKind::RoundRobin: return round_robin_decide(e);
        case BaselineKind::AllLocal: return all_local_decide(e);
        case BaselineKind::AllOffloading: return all_offloading_decide(e);
        case BaselineKind::Random: return random_decide(e, stream);
    }
    throw std::invalid_argument("baselines: unknown kind");
}

} // namespace leosched::baselines

#endif
