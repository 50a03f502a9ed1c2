#ifndef LEOSCHED_CONFIG_HPP
#define LEOSCHED_CONFIG_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/env.hpp"
#include "leosched/ppo.hpp"
#include "leosched/rng.hpp"

namespace leosched::cfg {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error("config: " + msg) {}
};

// Flat, typed experiment configuration. Defaults reproduce the reference
// scenario constants; keys marked "invented default" have no published value.
struct ExperimentConfig {
    // constellation
    int satellite_count = 12;
    double earth_radius_km = 6371.0;
    double orbit_altitude_km = 780.0;
    double angular_spacing_deg = 4.0;
    double angular_velocity_deg_s = 2e-4;
    double visibility_bound_deg = 10.0; // invented default, no published value
    double initial_gamma_offset_deg = 0.0;
    // link
    double beta0_db = -37.0;
    std::string distance_unit = "km"; // unit fed to the gain formula: km or m
    double tx_power_w = 5.0;
    double noise_power_w = 1e-6;
    double bandwidth_hz = 2e7;
    // workload
    int tasks_per_period = 20;
    double mean_data_size_bits = 1.6e8; // 20 MB decimal
    double level_prob_low = 1.0 / 3.0;
    double level_prob_medium = 1.0 / 3.0;
    double level_prob_high = 1.0 / 3.0;
    // adversary
    double mu_malicious = 3.0;
    // compute
    double q_local = 80.0;
    double f_local_hz = 6.5e9;
    double q_encrypt = 20.0;
    double f_encrypt_hz = 3e9;
    double hardware_coefficient = 1e-31;
    std::string q_satellite = "80";      // comma list or single value broadcast; invented default
    std::string f_satellite_hz = "1e10"; // invented default
    // objective and schedule
    double rho = 0.7;
    double beta1 = 1.0;
    double beta2 = 1.0;
    int periods_per_episode = 50;
    double period_duration_s = 60.0; // invented default
    // environment
    double rho_margin = 0.0;
    bool rho_penalty_mode = false;
    double rho_penalty_weight = 100.0;
    double obs_backlog_scale_s = 600.0;
    // agent
    std::int64_t total_timesteps = 500000;
    int update_interval = 5;
    std::string update_interval_unit = "episodes"; // episodes or steps
    int batch_size = 64;
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_range = 0.2;
    double value_coef = 0.5;
    double entropy_coef = 0.01;
    double learning_rate = 3e-4;
    int epochs_per_update = 10;
    int hidden_units = 64;
    int hidden_layers = 2;
    bool normalize_advantages = true;
    // baselines
    int greedy_samples = 1000;
    bool greedy_sampled_attacks = false;
    // harness
    std::string policy = "ppo";
    int episodes = 10;
    std::string seeds = "1";
    std::string out_dir = "out";
    std::string sweep_axis = "none";
    std::string sweep_values = "";
    std::string checkpoint_path = "";
};

namespace detail {

inline std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw ConfigError("cannot format value");
    return std::string(buf.data(), p);
}

inline double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(key + ": not a number: '" + s + "'");
    }
}

inline std::int64_t parse_int(const std::string& key, const std::string& s) {
    const double v = parse_double(key, s);
    if (std::floor(v) != v) throw ConfigError(key + ": expected an integer, got '" + s + "'");
    return static_cast<std::int64_t>(v);
}

inline bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + s + "'");
}

inline std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Field {
    const char* name;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    // Run bookkeeping (output paths, seed lists, policy selection) stays out
    // of the scenario hash: the hash identifies what was simulated, not where
    // results were written.
    bool hashed = true;
};

inline const std::vector<Field>& fields() {
    using C = ExperimentConfig;
    auto d = [](const char* n, double C::* m) {
        return Field{n, [n, m](C& c, const std::string& s) { c.*m = parse_double(n, s); },
                     [m](const C& c) { return format_double(c.*m); }};
    };
    auto i = [](const char* n, int C::* m) {
        return Field{n,
                     [n, m](C& c, const std::string& s) {
                         c.*m = static_cast<int>(parse_int(n, s));
                     },
                     [m](const C& c) { return std::to_string(c.*m); }};
    };
    auto i64 = [](const char* n, std::int64_t C::* m) {
        return Field{n, [n, m](C& c, const std::string& s) { c.*m = parse_int(n, s); },
                     [m](const C& c) { return std::to_string(c.*m); }};
    };
    auto b = [](const char* n, bool C::* m) {
        return Field{n, [n, m](C& c, const std::string& s) { c.*m = parse_bool(n, s); },
                     [m](const C& c) { return std::string(c.*m ? "true" : "false"); }};
    };
    auto str = [](const char* n, std::string C::* m) {
        return Field{n, [m](C& c, const std::string& s) { c.*m = s; },
                     [m](const C& c) { return c.*m; }};
    };
    static const std::vector<Field> table = {
        i("satellite_count", &C::satellite_count),
        d("earth_radius_km", &C::earth_radius_km),
        d("orbit_altitude_km", &C::orbit_altitude_km),
        d("angular_spacing_deg", &C::angular_spacing_deg),
        d("angular_velocity_deg_s", &C::angular_velocity_deg_s),
        d("visibility_bound_deg", &C::visibility_bound_deg),
        d("initial_gamma_offset_deg", &C::initial_gamma_offset_deg),
        d("beta0_db", &C::beta0_db),
        str("distance_unit", &C::distance_unit),
        d("tx_power_w", &C::tx_power_w),
        d("noise_power_w", &C::noise_power_w),
        d("bandwidth_hz", &C::bandwidth_hz),
        i("tasks_per_period", &C::tasks_per_period),
        d("mean_data_size_bits", &C::mean_data_size_bits),
        d("level_prob_low", &C::level_prob_low),
        d("level_prob_medium", &C::level_prob_medium),
        d("level_prob_high", &C::level_prob_high),
        d("mu_malicious", &C::mu_malicious),
        d("q_local", &C::q_local),
        d("f_local_hz", &C::f_local_hz),
        d("q_encrypt", &C::q_encrypt),
        d("f_encrypt_hz", &C::f_encrypt_hz),
        d("hardware_coefficient", &C::hardware_coefficient),
        str("q_satellite", &C::q_satellite),
        str("f_satellite_hz", &C::f_satellite_hz),
        d("rho", &C::rho),
        d("beta1", &C::beta1),
        d("beta2", &C::beta2),
        i("periods_per_episode", &C::periods_per_episode),
        d("period_duration_s", &C::period_duration_s),
        d("rho_margin", &C::rho_margin),
        b("rho_penalty_mode", &C::rho_penalty_mode),
        d("rho_penalty_weight", &C::rho_penalty_weight),
        d("obs_backlog_scale_s", &C::obs_backlog_scale_s),
        i64("total_timesteps", &C::total_timesteps),
        i("update_interval", &C::update_interval),
        str("update_interval_unit", &C::update_interval_unit),
        i("batch_size", &C::batch_size),
        d("gamma", &C::gamma),
        d("gae_lambda", &C::gae_lambda),
        d("clip_range", &C::clip_range),
        d("value_coef", &C::value_coef),
        d("entropy_coef", &C::entropy_coef),
        d("learning_rate", &C::learning_rate),
        i("epochs_per_update", &C::epochs_per_update),
        i("hidden_units", &C::hidden_units),
        i("hidden_layers", &C::hidden_layers),
        b("normalize_advantages", &C::normalize_advantages),
        i("greedy_samples", &C::greedy_samples),
        b("greedy_sampled_attacks", &C::greedy_sampled_attacks),
        {"policy", [](C& c, const std::string& s) { c.policy = s; },
         [](const C& c) { return c.policy; }, false},
        {"episodes", [](C& c, const std::string& s) { c.episodes = static_cast<int>(parse_int("episodes", s)); },
         [](const C& c) { return std::to_string(c.episodes); }, false},
        {"seeds", [](C& c, const std::string& s) { c.seeds = s; },
         [](const C& c) { return c.seeds; }, false},
        {"out_dir", [](C& c, const std::string& s) { c.out_dir = s; },
         [](const C& c) { return c.out_dir; }, false},
        {"sweep_axis", [](C& c, const std::string& s) { c.sweep_axis = s; },
         [](const C& c) { return c.sweep_axis; }, false},
        {"sweep_values", [](C& c, const std::string& s) { c.sweep_values = s; },
         [](const C& c) { return c.sweep_values; }, false},
        {"checkpoint_path", [](C& c, const std::string& s) { c.checkpoint_path = s; },
         [](const C& c) { return c.checkpoint_path; }, false},
    };
    return table;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const std::string& item : split_list(s)) out.push_back(parse_double(key, item));
    return out;
}

} // namespace detail

inline void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& f : detail::fields()) {
        if (key == f.name) {
            f.set(cfg, detail::trim(value));
            return;
        }
    }
    throw ConfigError("unknown key '" + key + "'");
}

// key = value lines, '#' comments, blank lines ignored.
inline void apply_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_override(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

// Every key can be overridden through the environment as LEOSCHED_<key>.
inline void apply_env_overrides(ExperimentConfig& cfg) {
    for (const auto& f : detail::fields()) {
        const std::string var = std::string("LEOSCHED_") + f.name;
        if (const char* v = std::getenv(var.c_str())) f.set(cfg, detail::trim(v));
    }
}

inline std::vector<std::uint64_t> seed_list(const ExperimentConfig& cfg) {
    std::vector<std::uint64_t> out;
    for (const std::string& s : detail::split_list(cfg.seeds))
        out.push_back(static_cast<std::uint64_t>(detail::parse_int("seeds", s)));
    return out;
}

inline std::vector<double> sweep_value_list(const ExperimentConfig& cfg) {
    return detail::parse_double_list("sweep_values", cfg.sweep_values);
}

inline void validate(const ExperimentConfig& cfg) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(cfg.satellite_count >= 0, "satellite_count must be nonnegative");
    require(cfg.earth_radius_km > 0, "earth_radius_km must be positive");
    require(cfg.orbit_altitude_km > 0, "orbit_altitude_km must be positive");
    require(cfg.angular_spacing_deg > 0, "angular_spacing_deg must be positive");
    require(cfg.angular_velocity_deg_s >= 0, "angular_velocity_deg_s must be nonnegative");
    require(cfg.visibility_bound_deg > 0 && cfg.visibility_bound_deg < 90,
            "visibility_bound_deg out of (0,90)");
    require(cfg.distance_unit == "km" || cfg.distance_unit == "m",
            "distance_unit must be km or m");
    require(cfg.tx_power_w > 0, "tx_power_w must be positive");
    require(cfg.noise_power_w > 0, "noise_power_w must be positive");
    require(cfg.bandwidth_hz > 0, "bandwidth_hz must be positive");
    require(cfg.tasks_per_period >= 0, "tasks_per_period must be nonnegative");
    require(cfg.mean_data_size_bits > 0, "mean_data_size_bits must be positive");
    require(cfg.level_prob_low >= 0 && cfg.level_prob_medium >= 0 && cfg.level_prob_high >= 0,
            "level probabilities must be nonnegative");
    const double psum = cfg.level_prob_low + cfg.level_prob_medium + cfg.level_prob_high;
    require(std::fabs(psum - 1.0) <= 1e-6, "level probabilities must sum to 1");
    require(cfg.mu_malicious >= 0, "mu_malicious must be nonnegative");
    require(cfg.q_local > 0, "q_local must be positive");
    require(cfg.f_local_hz > 0, "f_local_hz must be positive");
    require(cfg.q_encrypt >= 0, "q_encrypt must be nonnegative");
    require(cfg.f_encrypt_hz > 0, "f_encrypt_hz must be positive");
    require(cfg.hardware_coefficient > 0, "hardware_coefficient must be positive");
    for (double q : detail::parse_double_list("q_satellite", cfg.q_satellite))
        require(q > 0, "q_satellite entries must be positive");
    for (double f : detail::parse_double_list("f_satellite_hz", cfg.f_satellite_hz))
        require(f > 0, "f_satellite_hz entries must be positive");
    require(cfg.rho >= 0 && cfg.rho <= 1, "rho out of [0,1]");
    require(cfg.beta1 >= 0, "beta1 must be nonnegative");
    require(cfg.beta2 >= 0, "beta2 must be nonnegative");
    require(cfg.periods_per_episode >= 1, "periods_per_episode must be at least 1");
    require(cfg.period_duration_s > 0, "period_duration_s must be positive");
    require(cfg.rho_margin >= 0, "rho_margin must be nonnegative");
    require(cfg.rho_penalty_weight >= 0, "rho_penalty_weight must be nonnegative");
    require(cfg.obs_backlog_scale_s > 0, "obs_backlog_scale_s must be positive");
    require(cfg.total_timesteps >= 0, "total_timesteps must be nonnegative");
    require(cfg.update_interval >= 1, "update_interval must be at least 1");
    require(cfg.update_interval_unit == "episodes" || cfg.update_interval_unit == "steps",
            "update_interval_unit must be episodes or steps");
    require(cfg.batch_size >= 1, "batch_size must be at least 1");
    require(cfg.gamma >= 0 && cfg.gamma <= 1, "gamma out of [0,1]");
    require(cfg.gae_lambda >= 0 && cfg.gae_lambda <= 1, "gae_lambda out of [0,1]");
    require(cfg.clip_range > 0, "clip_range must be positive");
    require(cfg.value_coef >= 0, "value_coef must be nonnegative");
    require(cfg.entropy_coef >= 0, "entropy_coef must be nonnegative");
    require(cfg.learning_rate > 0, "learning_rate must be positive");
    require(cfg.epochs_per_update >= 1, "epochs_per_update must be at least 1");
    require(cfg.hidden_units >= 1, "hidden_units must be at least 1");
    require(cfg.hidden_layers >= 1, "hidden_layers must be at least 1");
    require(cfg.greedy_samples >= 1, "greedy_samples must be at least 1");
    require(cfg.episodes >= 1, "episodes must be at least 1");
    require(!seed_list(cfg).empty(), "seeds must not be empty");
    const bool known_axis = cfg.sweep_axis == "none" || cfg.sweep_axis == "update_interval" ||
                            cfg.sweep_axis == "learning_rate" || cfg.sweep_axis == "task_size" ||
                            cfg.sweep_axis == "f_local" || cfg.sweep_axis == "mu";
    require(known_axis, "sweep_axis must be one of none, update_interval, learning_rate, "
                        "task_size, f_local, mu");
    if (cfg.sweep_axis != "none")
        require(!sweep_value_list(cfg).empty(), "sweep_values must not be empty when sweep_axis is set");
    const auto policies = detail::split_list(cfg.policy);
    require(!policies.empty(), "policy must not be empty");
    for (const std::string& p : policies) {
        const bool known_policy = p == "ppo" || p == "greedy" || p == "round_robin" ||
                                  p == "all_local" || p == "all_offloading" || p == "random";
        require(known_policy, "policy '" + p + "' must be one of ppo, greedy, round_robin, "
                              "all_local, all_offloading, random");
    }
    // per-satellite lists must broadcast or match
    for (const char* key : {"q_satellite", "f_satellite_hz"}) {
        const std::string& raw = key == std::string("q_satellite") ? cfg.q_satellite : cfg.f_satellite_hz;
        const auto vals = detail::parse_double_list(key, raw);
        require(vals.size() == 1 || vals.size() == static_cast<std::size_t>(cfg.satellite_count),
                std::string(key) + " must hold one value or one per satellite");
    }
}

// Defaults, file, environment overrides, validation. Unknown keys anywhere
// are rejected with the offending name.
inline ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    apply_file(cfg, path);
    apply_env_overrides(cfg);
    validate(cfg);
    return cfg;
}

// Canonical serialization (registry order) and its FNV-1a hash. The hash is
// stamped into checkpoints and result rows so records can be traced back to
// the exact configuration.
inline std::string serialize(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& f : detail::fields()) {
        out += f.name;
        out += " = ";
        out += f.get(cfg);
        out += '\n';
    }
    return out;
}

inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
    return rng::fnv1a64(serialize(cfg));
}

inline env::EnvConfig to_env_config(const ExperimentConfig& cfg) {
    env::EnvConfig e;
    e.sim.constellation.satellite_count = cfg.satellite_count;
    e.sim.constellation.earth_radius_km = cfg.earth_radius_km;
    e.sim.constellation.orbit_altitude_km = cfg.orbit_altitude_km;
    e.sim.constellation.angular_spacing_deg = cfg.angular_spacing_deg;
    e.sim.constellation.angular_velocity_deg_s = cfg.angular_velocity_deg_s;
    e.sim.constellation.visibility_bound_deg = cfg.visibility_bound_deg;
    e.sim.constellation.initial_gamma_offset_deg = cfg.initial_gamma_offset_deg;
    e.sim.link.beta0 = std::pow(10.0, cfg.beta0_db / 10.0);
    e.sim.link.range_scale = cfg.distance_unit == "m" ? 1000.0 : 1.0;
    e.sim.link.tx_power_w = cfg.tx_power_w;
    e.sim.link.noise_power_w = cfg.noise_power_w;
    e.sim.link.bandwidth_hz = cfg.bandwidth_hz;
    e.sim.compute.cycles_per_bit_local = cfg.q_local;
    e.sim.compute.cpu_hz_local = cfg.f_local_hz;
    e.sim.compute.cycles_per_bit_encrypt = cfg.q_encrypt;
    e.sim.compute.cpu_hz_encrypt = cfg.f_encrypt_hz;
    e.sim.compute.hardware_coefficient = cfg.hardware_coefficient;
    auto broadcast = [&](const char* key, const std::string& raw) {
        auto vals = detail::parse_double_list(key, raw);
        if (vals.size() == 1) vals.assign(static_cast<std::size_t>(cfg.satellite_count), vals[0]);
        return vals;
    };
    e.sim.compute.cycles_per_bit_sat = broadcast("q_satellite", cfg.q_satellite);
    e.sim.compute.cpu_hz_sat = broadcast("f_satellite_hz", cfg.f_satellite_hz);
    e.sim.adversary.mean_malicious = cfg.mu_malicious;
    e.sim.beta1 = cfg.beta1;
    e.sim.beta2 = cfg.beta2;
    e.sim.period_duration_s = cfg.period_duration_s;
    e.workload.tasks_per_period = cfg.tasks_per_period;
    e.workload.mean_data_size_bits = cfg.mean_data_size_bits;
    const double psum = cfg.level_prob_low + cfg.level_prob_medium + cfg.level_prob_high;
    e.workload.level_probs = {cfg.level_prob_low / psum, cfg.level_prob_medium / psum,
                              cfg.level_prob_high / psum};
    e.periods_per_episode = cfg.periods_per_episode;
    e.rho = cfg.rho;
    e.rho_margin = cfg.rho_margin;
    e.rho_penalty_mode = cfg.rho_penalty_mode;
    e.rho_penalty_weight = cfg.rho_penalty_weight;
    e.obs_backlog_scale_s = cfg.obs_backlog_scale_s;
    return e;
}

inline ppo::PpoConfig to_ppo_config(const ExperimentConfig& cfg) {
    ppo::PpoConfig p;
    p.total_timesteps = cfg.total_timesteps;
    p.update_interval = cfg.update_interval;
    p.interval_in_episodes = cfg.update_interval_unit == "episodes";
    p.batch_size = cfg.batch_size;
    p.gamma = cfg.gamma;
    p.gae_lambda = cfg.gae_lambda;
    p.clip_range = cfg.clip_range;
    p.value_coef = cfg.value_coef;
    p.entropy_coef = cfg.entropy_coef;
    p.learning_rate = cfg.learning_rate;
    p.epochs_per_update = cfg.epochs_per_update;
    p.hidden.assign(static_cast<std::size_t>(cfg.hidden_layers), cfg.hidden_units);
    p.normalize_advantages = cfg.normalize_advantages;
    return p;
}

} // namespace leosched::cfg

#endif
