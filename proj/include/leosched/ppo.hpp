#ifndef LEOSCHED_PPO_HPP
#define LEOSCHED_PPO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "leosched/env.hpp"
#include "leosched/nn.hpp"
#include "leosched/rng.hpp"

namespace leosched::ppo {

struct PpoConfig {
    std::int64_t total_timesteps = 500000;
    int update_interval = 5;          // episodes (or steps, see below) per update
    bool interval_in_episodes = true; // false: raw micro-steps with bootstrapped GAE tail
    int batch_size = 64;              // minibatch size; also the minimum buffer for an update
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_range = 0.2;
    double value_coef = 0.5;   // c1
    double entropy_coef = 0.01; // c2
    double learning_rate = 3e-4;
    int epochs_per_update = 10;
    std::vector<int> hidden{64, 64};
    bool normalize_advantages = true;
};

// Categorical distribution over a masked action grid. Masked entries get
// probability exactly 0 (logit pinned to -inf before normalization), so no
// gradient ever flows into them.
struct MaskedDistribution {
    std::vector<double> log_probs; // -inf where masked
    std::vector<double> probs;     // 0 where masked
    double entropy = 0.0;
};

inline MaskedDistribution masked_categorical(std::span<const double> logits,
                                             std::span<const std::uint8_t> mask) {
    if (logits.size() != mask.size())
        throw std::invalid_argument("ppo: logits/mask size mismatch");
    const double ninf = -std::numeric_limits<double>::infinity();
    double mx = ninf;
    for (std::size_t i = 0; i < logits.size(); ++i)
        if (mask[i] && logits[i] > mx) mx = logits[i];
    if (mx == ninf) throw std::invalid_argument("ppo: all actions masked");
    double denom = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i)
        if (mask[i]) denom += std::exp(logits[i] - mx);
    const double log_denom = std::log(denom);
    MaskedDistribution d;
    d.log_probs.assign(logits.size(), ninf);
    d.probs.assign(logits.size(), 0.0);
    for (std::size_t i = 0; i < logits.size(); ++i) {
        if (!mask[i]) continue;
        d.log_probs[i] = logits[i] - mx - log_denom;
        d.probs[i] = std::exp(d.log_probs[i]);
        d.entropy -= d.probs[i] * d.log_probs[i];
    }
    return d;
}

inline int sample(const MaskedDistribution& d, rng::Stream& stream) {
    const double u = stream.uniform();
    double cum = 0.0;
    int last = -1;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        if (d.probs[i] <= 0.0) continue;
        last = static_cast<int>(i);
        cum += d.probs[i];
        if (u < cum) return last;
    }
    return last; // rounding tail
}

inline int argmax(const MaskedDistribution& d) {
    int best = -1;
    double bp = -1.0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        if (d.probs[i] > bp) {
            bp = d.probs[i];
            best = static_cast<int>(i);
        }
    }
    return best;
}

struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> returns;
};

// Generalized advantage estimation. dones[t] marks that the episode ended at
// step t, which truncates the exponentially weighted sum; bootstrap_value is
// V(s_n) for a rollout cut mid-episode (ignored when the tail is terminal).
inline GaeResult gae(std::span<const double> rewards, std::span<const double> values,
                     std::span<const std::uint8_t> dones, double gamma, double lambda,
                     double bootstrap_value = 0.0) {
    const std::size_t n = rewards.size();
    if (values.size() != n || dones.size() != n)
        throw std::invalid_argument("ppo: gae sequence length mismatch");
    GaeResult g;
    g.advantages.assign(n, 0.0);
    g.returns.assign(n, 0.0);
    double acc = 0.0;
    for (std::size_t t = n; t-- > 0;) {
        const double nonterminal = dones[t] ? 0.0 : 1.0;
        const double next_value = (t + 1 == n) ? bootstrap_value : values[t + 1];
        const double delta = rewards[t] + gamma * next_value * nonterminal - values[t];
        acc = delta + gamma * lambda * nonterminal * acc;
        g.advantages[t] = acc;
        g.returns[t] = acc + values[t];
    }
    return g;
}

// Clipped surrogate objective (maximized): E[min(r*A, clip(r,1-e,1+e)*A)].
inline double clipped_policy_loss(std::span<const double> log_prob_new,
                                  std::span<const double> log_prob_old,
                                  std::span<const double> advantages, double eps) {
    const std::size_t n = log_prob_new.size();
    if (log_prob_old.size() != n || advantages.size() != n)
        throw std::invalid_argument("ppo: loss batch size mismatch");
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ratio = std::exp(log_prob_new[i] - log_prob_old[i]);
        const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
        sum += std::min(ratio * advantages[i], clipped * advantages[i]);
    }
    return sum / static_cast<double>(n);
}

inline double value_loss(std::span<const double> v_pred, std::span<const double> returns) {
    if (v_pred.size() != returns.size())
        throw std::invalid_argument("ppo: value batch size mismatch");
    if (v_pred.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < v_pred.size(); ++i) {
        const double d = v_pred[i] - returns[i];
        sum += d * d;
    }
    return sum / static_cast<double>(v_pred.size());
}

// L = L_CLIP - c1*L_VF + c2*S, the maximized combination.
inline double total_loss(double policy_part, double value_part, double entropy, double c1,
                         double c2) {
    return policy_part - c1 * value_part + c2 * entropy;
}

class RolloutBuffer {
public:
    RolloutBuffer(int obs_size, int action_count)
        : obs_size_(obs_size), action_count_(action_count) {}

    void add(std::span<const double> obs, std::span<const std::uint8_t> mask, int action,
             double log_prob, double reward, bool done, double value) {
        if (static_cast<int>(obs.size()) != obs_size_ ||
            static_cast<int>(mask.size()) != action_count_)
            throw std::invalid_argument("ppo: transition shape mismatch");
        obs_.insert(obs_.end(), obs.begin(), obs.end());
        masks_.insert(masks_.end(), mask.begin(), mask.end());
        actions_.push_back(action);
        log_probs_.push_back(log_prob);
        rewards_.push_back(reward);
        dones_.push_back(done ? 1 : 0);
        values_.push_back(value);
    }

    std::size_t size() const { return actions_.size(); }
    void clear() {
        obs_.clear();
        masks_.clear();
        actions_.clear();
        log_probs_.clear();
        rewards_.clear();
        dones_.clear();
        values_.clear();
    }

    std::span<const double> obs(std::size_t i) const {
        return {obs_.data() + i * static_cast<std::size_t>(obs_size_),
                static_cast<std::size_t>(obs_size_)};
    }
    std::span<const std::uint8_t> mask(std::size_t i) const {
        return {masks_.data() + i * static_cast<std::size_t>(action_count_),
                static_cast<std::size_t>(action_count_)};
    }
    int action(std::size_t i) const { return actions_[i]; }
    double log_prob(std::size_t i) const { return log_probs_[i]; }
    const std::vector<double>& rewards() const { return rewards_; }
    const std::vector<std::uint8_t>& dones() const { return dones_; }
    const std::vector<double>& values() const { return values_; }

private:
    int obs_size_;
    int action_count_;
    std::vector<double> obs_;
    std::vector<std::uint8_t> masks_;
    std::vector<int> actions_;
    std::vector<double> log_probs_;
    std::vector<double> rewards_;
    std::vector<std::uint8_t> dones_;
    std::vector<double> values_;
};

struct UpdateDiagnostics {
    double policy_loss = 0.0; // L_CLIP at the post-update parameters
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    double mean_ratio = 1.0;
};

namespace detail {

inline void check_finite(const std::vector<double>& g, const char* what) {
    for (double x : g)
        if (!std::isfinite(x)) throw std::runtime_error(std::string("ppo: non-finite gradient in ") + what);
}

} // namespace detail

struct BatchEval {
    double policy_objective = 0.0; // L_CLIP over the subset
    double value_mse = 0.0;        // L_VF
    double entropy = 0.0;          // S
    double total = 0.0;            // L = L_CLIP - c1*L_VF + c2*S
};

// Combined objective over a set of transitions, with optional analytic
// gradients of -L (the minimized quantity) accumulated into the supplied
// shapes. The same code path drives the optimizer and the finite-difference
// checks.
inline BatchEval loss_and_gradients(const RolloutBuffer& buffer,
                                    std::span<const std::size_t> indices,
                                    std::span<const double> advantages,
                                    std::span<const double> returns, const nn::Mlp& policy,
                                    const nn::Mlp& value, const PpoConfig& cfg,
                                    nn::Mlp* policy_grad, nn::Mlp* value_grad) {
    const double mb = static_cast<double>(indices.size());
    if (indices.empty()) throw std::invalid_argument("ppo: empty batch");
    BatchEval ev;
    nn::Mlp::Trace trace;
    std::vector<double> dlogits(static_cast<std::size_t>(policy.output_size()));
    for (std::size_t i : indices) {
        const std::vector<double> logits = policy.forward(buffer.obs(i), &trace);
        const MaskedDistribution dist = masked_categorical(logits, buffer.mask(i));
        const int a = buffer.action(i);
        const double ratio =
            std::exp(dist.log_probs[static_cast<std::size_t>(a)] - buffer.log_prob(i));
        const double advantage = advantages[i];
        const double unclipped = ratio * advantage;
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_range, 1.0 + cfg.clip_range) * advantage;
        ev.policy_objective += std::min(unclipped, clipped) / mb;
        ev.entropy += dist.entropy / mb;
        if (policy_grad) {
            // d(-L_CLIP)/d log pi(a): min() follows the unclipped branch
            // whenever it is not larger; the clipped branch is flat in theta.
            const double dlogp = (unclipped <= clipped) ? -unclipped / mb : 0.0;
            std::fill(dlogits.begin(), dlogits.end(), 0.0);
            for (std::size_t k = 0; k < dlogits.size(); ++k) {
                if (dist.probs[k] <= 0.0 && static_cast<int>(k) != a) continue;
                const double indicator = (static_cast<int>(k) == a) ? 1.0 : 0.0;
                double dk = dlogp * (indicator - dist.probs[k]);
                if (dist.probs[k] > 0.0) {
                    // d(-c2*S)/dz_k = c2 * p_k * (log p_k + S)
                    dk += (cfg.entropy_coef / mb) * dist.probs[k] *
                          (dist.log_probs[k] + dist.entropy);
                }
                dlogits[k] = dk;
            }
            policy.backward(trace, dlogits, *policy_grad);
        }
        const std::vector<double> v = value.forward(buffer.obs(i), &trace);
        const double diff = v[0] - returns[i];
        ev.value_mse += diff * diff / mb;
        if (value_grad) {
            const double dvs[1] = {cfg.value_coef * 2.0 * diff / mb};
            value.backward(trace, dvs, *value_grad);
        }
    }
    ev.total = total_loss(ev.policy_objective, ev.value_mse, ev.entropy, cfg.value_coef,
                          cfg.entropy_coef);
    return ev;
}

// Whole-batch advantage preparation: GAE then optional normalization to zero
// mean and unit standard deviation.
inline GaeResult prepare_advantages(const RolloutBuffer& buffer, const PpoConfig& cfg,
                                    double bootstrap_value) {
    GaeResult g = gae(buffer.rewards(), buffer.values(), buffer.dones(), cfg.gamma,
                      cfg.gae_lambda, bootstrap_value);
    if (cfg.normalize_advantages) {
        const std::size_t n = g.advantages.size();
        double mean = 0.0;
        for (double a : g.advantages) mean += a;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double a : g.advantages) var += (a - mean) * (a - mean);
        const double stdev = std::sqrt(var / static_cast<double>(n));
        for (double& a : g.advantages) a = (a - mean) / (stdev + 1e-8);
    }
    return g;
}

// One PPO update: epochs of shuffled minibatch gradient steps on
// -L = -L_CLIP + c1*L_VF - c2*S. The buffer is cleared on exit; the caller
// synchronizes its old-policy copy afterwards.
inline UpdateDiagnostics update(RolloutBuffer& buffer, nn::Mlp& policy, nn::Mlp& value,
                                nn::Adam& policy_opt, nn::Adam& value_opt, const PpoConfig& cfg,
                                rng::Stream& shuffle_rng, double bootstrap_value = 0.0) {
    const std::size_t n = buffer.size();
    if (n == 0) throw std::invalid_argument("ppo: update on empty buffer");

    const GaeResult g = prepare_advantages(buffer, cfg, bootstrap_value);
    const std::vector<double>& adv = g.advantages;

    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);

    nn::Mlp policy_grad = policy.zeros_like();
    nn::Mlp value_grad = value.zeros_like();

    for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
        shuffle_rng.shuffle(indices);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
            policy_grad.zero();
            value_grad.zero();
            const std::span<const std::size_t> minibatch(indices.data() + start, stop - start);
            loss_and_gradients(buffer, minibatch, adv, g.returns, policy, value, cfg,
                               &policy_grad, &value_grad);
            detail::check_finite(policy_grad.params(), "policy");
            detail::check_finite(value_grad.params(), "value");
            policy_opt.step(policy.params(), policy_grad.params());
            value_opt.step(value.params(), value_grad.params());
        }
    }

    // Diagnostics against the post-update parameters over the whole buffer.
    UpdateDiagnostics diag;
    std::vector<double> lp_new(n), lp_old(n), vp(n);
    double entropy_sum = 0.0, ratio_sum = 0.0;
    std::size_t clipped_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> logits = policy.forward(buffer.obs(i));
        const MaskedDistribution dist = masked_categorical(logits, buffer.mask(i));
        lp_new[i] = dist.log_probs[static_cast<std::size_t>(buffer.action(i))];
        lp_old[i] = buffer.log_prob(i);
        entropy_sum += dist.entropy;
        const double ratio = std::exp(lp_new[i] - lp_old[i]);
        ratio_sum += ratio;
        if (std::fabs(ratio - 1.0) > cfg.clip_range) ++clipped_count;
        vp[i] = value.forward(buffer.obs(i))[0];
    }
    diag.policy_loss = clipped_policy_loss(lp_new, lp_old, adv, cfg.clip_range);
    diag.value_loss = value_loss(vp, g.returns);
    diag.entropy = entropy_sum / static_cast<double>(n);
    diag.mean_ratio = ratio_sum / static_cast<double>(n);
    diag.clip_fraction = static_cast<double>(clipped_count) / static_cast<double>(n);

    buffer.clear();
    return diag;
}

struct CurvePoint {
    int update_index = 0;
    std::int64_t env_steps = 0;
    double mean_episode_reward = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
};

struct TrainResult {
    nn::Mlp policy;
    nn::Mlp value;
    std::vector<CurvePoint> curve;
};

// Full rollout/update loop of the scheduling agent. Deterministic for a fixed
// seed: every random draw comes from named substreams of it. Rollouts are
// collected with the old-policy copy, which is synchronized after each update.
inline TrainResult train(const env::EnvConfig& env_cfg, const PpoConfig& cfg, std::uint64_t seed,
                         const std::function<void(const CurvePoint&)>& on_update = {}) {
    env::MdpEnv environment(env_cfg, rng::substream_seed(seed, "env"));
    rng::Stream policy_rng(rng::substream_seed(seed, "policy"));
    rng::Stream update_rng(rng::substream_seed(seed, "update"));

    std::vector<int> policy_sizes{environment.observation_size()};
    policy_sizes.insert(policy_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    policy_sizes.push_back(environment.action_count());
    std::vector<int> value_sizes{environment.observation_size()};
    value_sizes.insert(value_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    value_sizes.push_back(1);

    TrainResult result;
    result.policy = nn::Mlp(policy_sizes, policy_rng, 0.01);
    result.value = nn::Mlp(value_sizes, policy_rng, 1.0);
    nn::Mlp policy_old = result.policy;
    nn::AdamConfig adam_cfg;
    adam_cfg.learning_rate = cfg.learning_rate;
    nn::Adam policy_opt(result.policy.param_count(), adam_cfg);
    nn::Adam value_opt(result.value.param_count(), adam_cfg);

    RolloutBuffer buffer(environment.observation_size(), environment.action_count());
    std::vector<double> obs = environment.observation();
    std::int64_t steps = 0;
    int episodes_since_update = 0;
    int update_index = 0;
    double episode_reward = 0.0;
    double last_mean_reward = 0.0;
    std::vector<double> finished_rewards;
    bool last_done = false;

    while (steps < cfg.total_timesteps) {
        const std::vector<std::uint8_t> mask = environment.action_mask();
        const std::vector<double> logits = policy_old.forward(obs);
        const MaskedDistribution dist = masked_categorical(logits, mask);
        const int action = sample(dist, policy_rng);
        const double value_est = result.value.forward(obs)[0];
        const env::StepResult sr = environment.step(action);
        buffer.add(obs, mask, action, dist.log_probs[static_cast<std::size_t>(action)], sr.reward,
                   sr.episode_done, value_est);
        ++steps;
        episode_reward += sr.reward;
        last_done = sr.episode_done;
        if (sr.episode_done) {
            finished_rewards.push_back(episode_reward);
            episode_reward = 0.0;
            ++episodes_since_update;
            obs = environment.reset();
        } else {
            obs = sr.observation;
        }

        const bool target_reached = cfg.interval_in_episodes
                                        ? episodes_since_update >= cfg.update_interval
                                        : buffer.size() >= static_cast<std::size_t>(cfg.update_interval);
        if (target_reached && buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
            const double bootstrap = last_done ? 0.0 : result.value.forward(obs)[0];
            const UpdateDiagnostics diag = update(buffer, result.policy, result.value, policy_opt,
                                                  value_opt, cfg, update_rng, bootstrap);
            policy_old = result.policy;
            ++update_index;
            if (!finished_rewards.empty()) {
                double sum = 0.0;
                for (double r : finished_rewards) sum += r;
                last_mean_reward = sum / static_cast<double>(finished_rewards.size());
                finished_rewards.clear();
            }
            episodes_since_update = 0;
            CurvePoint point{update_index, steps,           last_mean_reward, diag.policy_loss,
                             diag.value_loss, diag.entropy, diag.clip_fraction};
            result.curve.push_back(point);
            if (on_update) on_update(point);
        }
    }
    return result;
}

} // namespace leosched::ppo

#endif
