#ifndef LEOSCHED_HARNESS_HPP
#define LEOSCHED_HARNESS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "leosched/baselines.hpp"
#include "leosched/checkpoint.hpp"
#include "leosched/config.hpp"
#include "leosched/env.hpp"
#include "leosched/ppo.hpp"

namespace leosched::harness {

// One evaluated episode. wall_clock_s stays in memory; results.csv holds only
// the deterministic columns so a rerun reproduces it byte for byte.
struct RunRecord {
    std::uint64_t config_hash = 0;
    std::string policy;
    std::string sweep_axis = "none";
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    int episode = 0;
    double makespan_s = 0.0;
    double energy_j = 0.0;
    double attacks = 0.0;
    double reward = 0.0;
    double cost = 0.0;
    double wall_clock_s = 0.0;
};

inline std::vector<std::string> policy_list(const cfg::ExperimentConfig& config) {
    return cfg::detail::split_list(config.policy);
}

namespace detail {

using cfg::detail::format_double;

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline void apply_sweep_value(cfg::ExperimentConfig& c, const std::string& axis, double value) {
    if (axis == "none") return;
    if (axis == "update_interval") c.update_interval = static_cast<int>(value);
    else if (axis == "learning_rate") c.learning_rate = value;
    else if (axis == "task_size") c.mean_data_size_bits = value;
    else if (axis == "f_local") c.f_local_hz = value;
    else if (axis == "mu") c.mu_malicious = value;
    else throw cfg::ConfigError("unknown sweep axis '" + axis + "'");
}

inline std::string cell_tag(const std::string& axis, double value, std::uint64_t seed) {
    std::string tag;
    if (axis != "none") tag += axis + "-" + format_double(value) + "_";
    tag += "seed-" + std::to_string(seed);
    return tag;
}

} // namespace detail

inline const char* kResultsHeader =
    "config_hash,policy,sweep_axis,sweep_value,seed,episode,makespan_s,energy_j,attacks,reward,cost";

inline std::string results_row(const RunRecord& r) {
    using detail::format_double;
    std::string row = detail::hash_hex(r.config_hash);
    row += ',' + r.policy;
    row += ',' + r.sweep_axis;
    row += ',' + format_double(r.sweep_value);
    row += ',' + std::to_string(r.seed);
    row += ',' + std::to_string(r.episode);
    row += ',' + format_double(r.makespan_s);
    row += ',' + format_double(r.energy_j);
    row += ',' + format_double(r.attacks);
    row += ',' + format_double(r.reward);
    row += ',' + format_double(r.cost);
    return row;
}

// Runs one evaluation episode. Every random draw derives from env_seed, so
// two policies given the same env_seed face the identical task stream. The
// agent acts greedily on its policy head; baselines emit whole-period
// decisions through the same environment contract.
inline RunRecord evaluate_episode(const cfg::ExperimentConfig& cell,
                                  const env::EnvConfig& env_cfg, const std::string& policy_name,
                                  const nn::Mlp* agent, std::uint64_t env_seed) {
    const auto t_begin = std::chrono::steady_clock::now();
    env::MdpEnv e(env_cfg, env_seed);
    rng::Stream baseline_stream(rng::substream_seed(env_seed, "greedy"));
    baselines::DecideOptions opts;
    opts.greedy_samples = cell.greedy_samples;
    opts.greedy_sampled_attacks = cell.greedy_sampled_attacks;
    std::optional<baselines::BaselineKind> kind = baselines::baseline_from_name(policy_name);
    if (!kind && policy_name != "ppo")
        throw std::invalid_argument("harness: unknown policy '" + policy_name + "'");
    if (!kind && agent == nullptr)
        throw std::invalid_argument("harness: ppo evaluation needs a trained policy");

    RunRecord rec;
    rec.policy = policy_name;
    rec.seed = env_seed;
    while (!e.episode_done()) {
        env::StepResult sr;
        if (kind) {
            const sim::PeriodDecision decision = baselines::decide(*kind, e, baseline_stream, opts);
            sr = e.play_decision(decision);
        } else {
            for (;;) {
                const std::vector<std::uint8_t> mask = e.action_mask();
                const std::vector<double> logits = agent->forward(e.observation());
                const ppo::MaskedDistribution dist = ppo::masked_categorical(logits, mask);
                sr = e.step(ppo::argmax(dist));
                if (sr.period_done) break;
            }
        }
        rec.reward += sr.reward;
        const sim::PeriodOutcome& o = e.last_outcome();
        rec.makespan_s += o.makespan_s;
        rec.energy_j += o.energy_j;
        rec.attacks += o.attacks;
    }
    rec.cost = rec.makespan_s + cell.beta1 * rec.energy_j + cell.beta2 * rec.attacks;
    rec.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return rec;
}

inline void write_curve_csv(const std::vector<ppo::CurvePoint>& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("harness: cannot write " + path);
    out << "update_index,env_steps,mean_episode_reward,policy_loss,value_loss,entropy,clip_fraction\n";
    for (const auto& p : curve) {
        out << p.update_index << ',' << p.env_steps << ','
            << detail::format_double(p.mean_episode_reward) << ','
            << detail::format_double(p.policy_loss) << ',' << detail::format_double(p.value_loss)
            << ',' << detail::format_double(p.entropy) << ','
            << detail::format_double(p.clip_fraction) << '\n';
    }
}

struct SummaryRow {
    std::string policy;
    std::string sweep_axis;
    double sweep_value = 0.0;
    std::size_t episodes = 0;
    double mean_cost = 0.0, std_cost = 0.0;
    double mean_makespan_s = 0.0, mean_energy_j = 0.0, mean_attacks = 0.0, mean_reward = 0.0;
};

inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
    std::map<std::tuple<std::string, std::string, double>, std::vector<const RunRecord*>> cells;
    for (const auto& r : records)
        cells[{r.policy, r.sweep_axis, r.sweep_value}].push_back(&r);
    std::vector<SummaryRow> rows;
    for (const auto& [key, rs] : cells) {
        SummaryRow s;
        std::tie(s.policy, s.sweep_axis, s.sweep_value) = key;
        s.episodes = rs.size();
        for (const auto* r : rs) {
            s.mean_cost += r->cost;
            s.mean_makespan_s += r->makespan_s;
            s.mean_energy_j += r->energy_j;
            s.mean_attacks += r->attacks;
            s.mean_reward += r->reward;
        }
        const double n = static_cast<double>(rs.size());
        s.mean_cost /= n;
        s.mean_makespan_s /= n;
        s.mean_energy_j /= n;
        s.mean_attacks /= n;
        s.mean_reward /= n;
        double var = 0.0;
        for (const auto* r : rs) var += (r->cost - s.mean_cost) * (r->cost - s.mean_cost);
        s.std_cost = rs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        rows.push_back(s);
    }
    return rows;
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("harness: cannot write " + path);
    out << "policy,sweep_axis,sweep_value,episodes,mean_cost,std_cost,mean_makespan_s,"
           "mean_energy_j,mean_attacks,mean_reward\n";
    using detail::format_double;
    for (const auto& s : rows) {
        out << s.policy << ',' << s.sweep_axis << ',' << format_double(s.sweep_value) << ','
            << s.episodes << ',' << format_double(s.mean_cost) << ','
            << format_double(s.std_cost) << ',' << format_double(s.mean_makespan_s) << ','
            << format_double(s.mean_energy_j) << ',' << format_double(s.mean_attacks) << ','
            << format_double(s.mean_reward) << '\n';
    }
}

struct RunOptions {
    bool train_agent = true; // train when the policy list contains ppo and no checkpoint is given
    std::ostream* log = nullptr;
};

// Full experiment driver: sweep cells x seeds x policies x episodes.
// results.csv rows are flushed as they are produced so partial output
// survives an abort; summary.csv is rebuilt at the end.
inline std::vector<RunRecord> run(const cfg::ExperimentConfig& config, const RunOptions& opt = {}) {
    cfg::validate(config);
    const std::vector<std::string> policies = policy_list(config);
    const std::vector<std::uint64_t> seeds = cfg::seed_list(config);
    std::vector<double> values;
    if (config.sweep_axis == "none") values.push_back(0.0);
    else values = cfg::sweep_value_list(config);

    std::filesystem::create_directories(config.out_dir);
    std::ofstream results(std::filesystem::path(config.out_dir) / "results.csv");
    if (!results) throw std::runtime_error("harness: cannot write results.csv");
    results << kResultsHeader << '\n';
    results.flush();

    std::vector<RunRecord> records;
    for (double value : values) {
        cfg::ExperimentConfig cell = config;
        detail::apply_sweep_value(cell, config.sweep_axis, value);
        cfg::validate(cell);
        const std::uint64_t cell_hash = cfg::config_hash(cell);
        const env::EnvConfig env_cfg = cfg::to_env_config(cell);
        for (std::uint64_t seed : seeds) {
            std::optional<nn::Mlp> agent;
            for (const std::string& policy : policies) {
                if (policy == "ppo" && !agent) {
                    if (!cell.checkpoint_path.empty()) {
                        const ppo::Checkpoint c = ppo::load_checkpoint(cell.checkpoint_path);
                        agent = c.policy();
                        if (opt.log)
                            *opt.log << "loaded checkpoint " << cell.checkpoint_path << "\n";
                    } else if (opt.train_agent) {
                        const std::string tag = detail::cell_tag(config.sweep_axis, value, seed);
                        if (opt.log) *opt.log << "training ppo [" << tag << "] ...\n";
                        ppo::TrainResult tr = ppo::train(env_cfg, cfg::to_ppo_config(cell),
                                                         rng::substream_seed(seed, "train"));
                        agent = tr.policy;
                        const auto dir = std::filesystem::path(cell.out_dir);
                        ppo::save_checkpoint(
                            ppo::Checkpoint::from_networks(tr.policy, tr.value, cell_hash),
                            (dir / ("checkpoint_" + tag + ".json")).string());
                        write_curve_csv(tr.curve, (dir / ("curve_" + tag + ".csv")).string());
                        if (opt.log && !tr.curve.empty())
                            *opt.log << "  final mean episode reward "
                                     << tr.curve.back().mean_episode_reward << "\n";
                    } else {
                        throw std::invalid_argument("harness: ppo requested without checkpoint or training");
                    }
                }
                for (int ep = 0; ep < cell.episodes; ++ep) {
                    const std::uint64_t env_seed = rng::substream_seed(seed, "eval", static_cast<std::uint64_t>(ep));
                    RunRecord rec = evaluate_episode(cell, env_cfg, policy,
                                                     agent ? &*agent : nullptr, env_seed);
                    rec.config_hash = cell_hash;
                    rec.sweep_axis = config.sweep_axis;
                    rec.sweep_value = value;
                    rec.seed = seed;
                    rec.episode = ep;
                    records.push_back(rec);
                    results << results_row(rec) << '\n';
                    results.flush();
                }
            }
        }
    }
    write_summary_csv(summarize(records),
                      (std::filesystem::path(config.out_dir) / "summary.csv").string());
    return records;
}

struct CompareRow {
    int rank = 0;
    std::string policy;
    std::size_t episodes = 0;
    double mean_cost = 0.0;
    double delta_vs_best = 0.0; // paired mean difference against the ranked-first policy
};

// Paired comparison of mean cost across policies evaluated under common
// random numbers. Requires every policy to cover the same (sweep value, seed,
// episode) cells.
inline std::vector<CompareRow> compare(const std::vector<RunRecord>& records) {
    using Key = std::tuple<double, std::uint64_t, int>;
    std::map<std::string, std::map<Key, double>> by_policy;
    for (const auto& r : records)
        by_policy[r.policy][{r.sweep_value, r.seed, r.episode}] = r.cost;
    if (by_policy.size() < 2)
        throw std::invalid_argument("compare: need at least two policies");
    const auto& ref = by_policy.begin()->second;
    for (const auto& [name, cells] : by_policy) {
        if (cells.size() != ref.size())
            throw std::invalid_argument("compare: mismatched seeds between policies");
        for (const auto& [key, cost] : cells)
            if (ref.find(key) == ref.end())
                throw std::invalid_argument("compare: mismatched seeds between policies");
    }
    std::vector<CompareRow> rows;
    for (const auto& [name, cells] : by_policy) {
        CompareRow row;
        row.policy = name;
        row.episodes = cells.size();
        for (const auto& [key, cost] : cells) row.mean_cost += cost;
        row.mean_cost /= static_cast<double>(cells.size());
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
        return a.mean_cost < b.mean_cost;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].rank = static_cast<int>(i) + 1;
        rows[i].delta_vs_best = rows[i].mean_cost - rows[0].mean_cost;
    }
    return rows;
}

inline void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("harness: cannot write " + path);
    out << "rank,policy,episodes,mean_cost,delta_vs_best\n";
    for (const auto& r : rows) {
        out << r.rank << ',' << r.policy << ',' << r.episodes << ','
            << detail::format_double(r.mean_cost) << ','
            << detail::format_double(r.delta_vs_best) << '\n';
    }
}

// Reads a results.csv produced by run(); used by the compare subcommand.
inline std::vector<RunRecord> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("harness: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader)
        throw std::runtime_error("harness: unexpected results.csv header in " + path);
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 11) throw std::runtime_error("harness: malformed row in " + path);
        RunRecord r;
        r.config_hash = std::stoull(f[0], nullptr, 16);
        r.policy = f[1];
        r.sweep_axis = f[2];
        r.sweep_value = std::stod(f[3]);
        r.seed = std::stoull(f[4]);
        r.episode = std::stoi(f[5]);
        r.makespan_s = std::stod(f[6]);
        r.energy_j = std::stod(f[7]);
        r.attacks = std::stod(f[8]);
        r.reward = std::stod(f[9]);
        r.cost = std::stod(f[10]);
        records.push_back(r);
    }
    return records;
}

} // namespace leosched::harness

#endif
