#ifndef LEOSCHED_CHECKPOINT_HPP
#define LEOSCHED_CHECKPOINT_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "leosched/nn.hpp"

namespace leosched::ppo {

// Versioned textual dump of the trained heads plus the hash of the config
// they were trained under.
struct Checkpoint {
    int version = 1;
    std::uint64_t config_hash = 0;
    std::vector<int> policy_sizes;
    std::vector<double> policy_params;
    std::vector<int> value_sizes;
    std::vector<double> value_params;

    static Checkpoint from_networks(const nn::Mlp& policy, const nn::Mlp& value,
                                    std::uint64_t config_hash) {
        Checkpoint c;
        c.config_hash = config_hash;
        c.policy_sizes = policy.sizes();
        c.policy_params = policy.params();
        c.value_sizes = value.sizes();
        c.value_params = value.params();
        return c;
    }

    nn::Mlp policy() const { return nn::Mlp::from_params(policy_sizes, policy_params); }
    nn::Mlp value() const { return nn::Mlp::from_params(value_sizes, value_params); }
};

inline void save_checkpoint(const Checkpoint& c, const std::string& path) {
    nlohmann::json j;
    j["version"] = c.version;
    j["config_hash"] = c.config_hash;
    j["policy_sizes"] = c.policy_sizes;
    j["policy_params"] = c.policy_params;
    j["value_sizes"] = c.value_sizes;
    j["value_params"] = c.value_params;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
    out << j.dump();
    out << '\n';
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
    nlohmann::json j;
    in >> j;
    Checkpoint c;
    c.version = j.at("version").get<int>();
    if (c.version != 1) throw std::runtime_error("checkpoint: unsupported version in " + path);
    c.config_hash = j.at("config_hash").get<std::uint64_t>();
    c.policy_sizes = j.at("policy_sizes").get<std::vector<int>>();
    c.policy_params = j.at("policy_params").get<std::vector<double>>();
    c.value_sizes = j.at("value_sizes").get<std::vector<int>>();
    c.value_params = j.at("value_params").get<std::vector<double>>();
    return c;
}

} // namespace leosched::ppo

#endif
