// Command-line front end: train / eval / sweep / compare.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leosched/checkpoint.hpp"
#include "leosched/config.hpp"
#include "leosched/harness.hpp"
#include "leosched/ppo.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string seeds;
    std::string out_dir;
    std::string policy;
    std::string checkpoint;
    std::string sweep_axis;
    std::string sweep_values;
    long long episodes = -1;
    long long timesteps = -1;
    std::vector<std::string> sets;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "configuration file (key = value lines)");
    sub->add_option("--seed", f.seeds, "seed or comma-separated seed list");
    sub->add_option("--out", f.out_dir, "output directory");
    sub->add_option("--episodes", f.episodes, "evaluation episodes per cell");
    sub->add_option("--timesteps", f.timesteps, "training micro-steps");
    sub->add_option("--set", f.sets, "override any config key, key=value (repeatable)");
}

leosched::cfg::ExperimentConfig build_config(const CommonFlags& f) {
    namespace cfg = leosched::cfg;
    cfg::ExperimentConfig c;
    if (!f.config_path.empty()) cfg::apply_file(c, f.config_path);
    cfg::apply_env_overrides(c);
    for (const std::string& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw cfg::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg::apply_override(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!f.seeds.empty()) c.seeds = f.seeds;
    if (!f.out_dir.empty()) c.out_dir = f.out_dir;
    if (!f.policy.empty()) c.policy = f.policy;
    if (!f.checkpoint.empty()) c.checkpoint_path = f.checkpoint;
    if (!f.sweep_axis.empty()) c.sweep_axis = f.sweep_axis;
    if (!f.sweep_values.empty()) c.sweep_values = f.sweep_values;
    if (f.episodes >= 0) c.episodes = static_cast<int>(f.episodes);
    if (f.timesteps >= 0) c.total_timesteps = f.timesteps;
    cfg::validate(c);
    return c;
}

void write_config_snapshot(const leosched::cfg::ExperimentConfig& c) {
    std::filesystem::create_directories(c.out_dir);
    std::ofstream out(std::filesystem::path(c.out_dir) / "config.txt");
    out << leosched::cfg::serialize(c);
}

int cmd_train(const CommonFlags& f) {
    namespace ls = leosched;
    ls::cfg::ExperimentConfig c = build_config(f);
    write_config_snapshot(c);
    const std::uint64_t seed = ls::cfg::seed_list(c).front();
    const std::uint64_t hash = ls::cfg::config_hash(c);
    std::cout << "training ppo, seed " << seed << ", " << c.total_timesteps << " steps\n";
    ls::ppo::TrainResult tr =
        ls::ppo::train(ls::cfg::to_env_config(c), ls::cfg::to_ppo_config(c),
                       ls::rng::substream_seed(seed, "train"), [](const ls::ppo::CurvePoint& p) {
                           std::cout << "update " << p.update_index << "  steps " << p.env_steps
                                     << "  mean episode reward " << p.mean_episode_reward << "\n";
                       });
    const auto dir = std::filesystem::path(c.out_dir);
    ls::ppo::save_checkpoint(ls::ppo::Checkpoint::from_networks(tr.policy, tr.value, hash),
                             (dir / "checkpoint.json").string());
    ls::harness::write_curve_csv(tr.curve, (dir / "curve.csv").string());
    std::cout << "wrote " << (dir / "checkpoint.json").string() << " and "
              << (dir / "curve.csv").string() << "\n";
    return 0;
}

int cmd_run(const CommonFlags& f, bool needs_axis) {
    namespace ls = leosched;
    ls::cfg::ExperimentConfig c = build_config(f);
    if (needs_axis && c.sweep_axis == "none")
        throw ls::cfg::ConfigError("sweep requires --sweep-axis and --sweep-values");
    write_config_snapshot(c);
    ls::harness::RunOptions opt;
    opt.log = &std::cout;
    const std::vector<ls::harness::RunRecord> records = ls::harness::run(c, opt);
    std::cout << "wrote " << records.size() << " episode rows to "
              << (std::filesystem::path(c.out_dir) / "results.csv").string() << "\n";
    if (ls::harness::policy_list(c).size() >= 2) {
        const auto table = ls::harness::compare(records);
        ls::harness::write_compare_csv(
            table, (std::filesystem::path(c.out_dir) / "compare.csv").string());
        for (const auto& row : table)
            std::cout << "  #" << row.rank << "  " << row.policy << "  mean cost "
                      << row.mean_cost << "  (+" << row.delta_vs_best << ")\n";
    }
    return 0;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& out_dir) {
    namespace ls = leosched;
    std::vector<ls::harness::RunRecord> records;
    for (const std::string& path : files) {
        const auto part = ls::harness::read_results_csv(path);
        records.insert(records.end(), part.begin(), part.end());
    }
    const auto table = ls::harness::compare(records);
    std::cout << "rank,policy,episodes,mean_cost,delta_vs_best\n";
    for (const auto& row : table)
        std::cout << row.rank << ',' << row.policy << ',' << row.episodes << ',' << row.mean_cost
                  << ',' << row.delta_vs_best << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        ls::harness::write_compare_csv(table,
                                       (std::filesystem::path(out_dir) / "compare.csv").string());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Security-sensitive task offloading to a LEO satellite edge: "
                 "simulator, PPO scheduler, baselines, experiment harness"};
    app.require_subcommand(1);

    CommonFlags train_f, eval_f, sweep_f;
    std::vector<std::string> compare_files;
    std::string compare_out;

    CLI::App* train = app.add_subcommand("train", "train the scheduling agent");
    add_common(train, train_f);

    CLI::App* eval = app.add_subcommand("eval", "evaluate policies, write results.csv/summary.csv");
    add_common(eval, eval_f);
    eval->add_option("--policy", eval_f.policy, "policy name or comma list "
                     "(ppo, greedy, round_robin, all_local, all_offloading, random)");
    eval->add_option("--checkpoint", eval_f.checkpoint, "checkpoint to evaluate (policy ppo)");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one axis over a value list");
    add_common(sweep, sweep_f);
    sweep->add_option("--policy", sweep_f.policy, "policy name or comma list");
    sweep->add_option("--checkpoint", sweep_f.checkpoint, "checkpoint to evaluate (policy ppo)");
    sweep->add_option("--sweep-axis", sweep_f.sweep_axis,
                      "axis: update_interval, learning_rate, task_size, f_local, mu");
    sweep->add_option("--sweep-values", sweep_f.sweep_values, "comma-separated values");

    CLI::App* compare = app.add_subcommand("compare", "rank policies from results.csv files");
    compare->add_option("files", compare_files, "results.csv files")->required()->expected(-1);
    compare->add_option("--out", compare_out, "directory for compare.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(train_f);
        if (eval->parsed()) return cmd_run(eval_f, false);
        if (sweep->parsed()) return cmd_run(sweep_f, true);
        if (compare->parsed()) return cmd_compare(compare_files, compare_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
