#ifndef LEOSCHED_NN_HPP
#define LEOSCHED_NN_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "leosched/rng.hpp"

namespace leosched::nn {

// Fully connected network with tanh hidden activations and a linear output,
// parameters stored in one flat vector (weights row-major, then biases, per
// layer). Flat storage keeps optimizer state, checkpoints and
// finite-difference checks trivial. Sizes here are tiny, so everything is
// plain loops.
class Mlp {
public:
    Mlp() = default;

    // sizes = {input, hidden..., output}. output_scale shrinks the last
    // layer's initial weights (small policy logits start near-uniform).
    Mlp(std::vector<int> sizes, rng::Stream& init, double output_scale = 1.0)
        : sizes_(std::move(sizes)) {
        if (sizes_.size() < 2) throw std::invalid_argument("nn: need at least input and output layer");
        offsets_.reserve(layer_count());
        std::size_t total = 0;
        for (std::size_t l = 0; l < layer_count(); ++l) {
            offsets_.push_back(total);
            total += static_cast<std::size_t>(in(l)) * static_cast<std::size_t>(out(l)) +
                     static_cast<std::size_t>(out(l));
        }
        params_.assign(total, 0.0);
        for (std::size_t l = 0; l < layer_count(); ++l) {
            const double scale = std::sqrt(6.0 / (in(l) + out(l))) *
                                 (l + 1 == layer_count() ? output_scale : 1.0);
            double* w = weights(l);
            for (int k = 0; k < in(l) * out(l); ++k) w[k] = init.uniform(-scale, scale);
            // biases stay zero
        }
    }

    std::size_t layer_count() const { return sizes_.size() - 1; }
    int in(std::size_t l) const { return sizes_[l]; }
    int out(std::size_t l) const { return sizes_[l + 1]; }
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    const std::vector<int>& sizes() const { return sizes_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    std::size_t param_count() const { return params_.size(); }

    double* weights(std::size_t l) { return params_.data() + offsets_[l]; }
    const double* weights(std::size_t l) const { return params_.data() + offsets_[l]; }
    double* biases(std::size_t l) {
        return params_.data() + offsets_[l] +
               static_cast<std::size_t>(in(l)) * static_cast<std::size_t>(out(l));
    }
    const double* biases(std::size_t l) const {
        return params_.data() + offsets_[l] +
               static_cast<std::size_t>(in(l)) * static_cast<std::size_t>(out(l));
    }

    // Activations cached by the forward pass; act[0] is the input, act[l+1]
    // the output of layer l (post-tanh except for the last layer).
    struct Trace {
        std::vector<std::vector<double>> act;
    };

    std::vector<double> forward(std::span<const double> x, Trace* trace = nullptr) const {
        if (static_cast<int>(x.size()) != input_size())
            throw std::invalid_argument("nn: input size mismatch");
        std::vector<double> cur(x.begin(), x.end());
        if (trace) {
            trace->act.clear();
            trace->act.push_back(cur);
        }
        for (std::size_t l = 0; l < layer_count(); ++l) {
            std::vector<double> nxt(static_cast<std::size_t>(out(l)));
            const double* w = weights(l);
            const double* b = biases(l);
            for (int o = 0; o < out(l); ++o) {
                double z = b[o];
                const double* row = w + static_cast<std::size_t>(o) * static_cast<std::size_t>(in(l));
                for (int k = 0; k < in(l); ++k) z += row[k] * cur[static_cast<std::size_t>(k)];
                nxt[static_cast<std::size_t>(o)] = (l + 1 == layer_count()) ? z : std::tanh(z);
            }
            cur.swap(nxt);
            if (trace) trace->act.push_back(cur);
        }
        return cur;
    }

    // Accumulates dL/dparams into grad given dL/doutput; grad must have this
    // network's shape. With tanh, act' = 1 - act^2, so the cached activations
    // are all the backward pass needs.
    void backward(const Trace& trace, std::span<const double> dout, Mlp& grad) const {
        if (grad.param_count() != param_count()) throw std::invalid_argument("nn: gradient shape mismatch");
        std::vector<double> delta(dout.begin(), dout.end());
        for (std::size_t li = layer_count(); li-- > 0;) {
            const std::vector<double>& input = trace.act[li];
            double* gw = grad.weights(li);
            double* gb = grad.biases(li);
            for (int o = 0; o < out(li); ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                gb[o] += d;
                double* row = gw + static_cast<std::size_t>(o) * static_cast<std::size_t>(in(li));
                for (int k = 0; k < in(li); ++k) row[k] += d * input[static_cast<std::size_t>(k)];
            }
            if (li == 0) break;
            const double* w = weights(li);
            std::vector<double> prev(static_cast<std::size_t>(in(li)), 0.0);
            for (int o = 0; o < out(li); ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                const double* row = w + static_cast<std::size_t>(o) * static_cast<std::size_t>(in(li));
                for (int k = 0; k < in(li); ++k) prev[static_cast<std::size_t>(k)] += d * row[k];
            }
            // through the tanh of layer li-1
            const std::vector<double>& a = trace.act[li];
            for (int k = 0; k < in(li); ++k)
                prev[static_cast<std::size_t>(k)] *= 1.0 - a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
            delta.swap(prev);
        }
    }

    Mlp zeros_like() const {
        Mlp g;
        g.sizes_ = sizes_;
        g.offsets_ = offsets_;
        g.params_.assign(params_.size(), 0.0);
        return g;
    }

    void zero() { params_.assign(params_.size(), 0.0); }

    static Mlp from_params(std::vector<int> sizes, std::vector<double> params) {
        Mlp m;
        m.sizes_ = std::move(sizes);
        std::size_t total = 0;
        for (std::size_t l = 0; l < m.layer_count(); ++l) {
            m.offsets_.push_back(total);
            total += static_cast<std::size_t>(m.in(l)) * static_cast<std::size_t>(m.out(l)) +
                     static_cast<std::size_t>(m.out(l));
        }
        if (params.size() != total) throw std::invalid_argument("nn: parameter count mismatch");
        m.params_ = std::move(params);
        return m;
    }

private:
    std::vector<int> sizes_;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

struct AdamConfig {
    double learning_rate = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
public:
    explicit Adam(std::size_t param_count, AdamConfig cfg = {})
        : cfg_(cfg), m_(param_count, 0.0), v_(param_count, 0.0) {}

    void set_learning_rate(double lr) { cfg_.learning_rate = lr; }

    // One descent step: params -= lr * mhat / (sqrt(vhat) + eps).
    void step(std::vector<double>& params, const std::vector<double>& grad) {
        if (params.size() != m_.size() || grad.size() != m_.size())
            throw std::invalid_argument("nn: adam size mismatch");
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
        const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
            v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
            const double mhat = m_[i] / bc1;
            const double vhat = v_[i] / bc2;
            params[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
        }
    }

private:
    AdamConfig cfg_;
    std::vector<double> m_, v_;
    double t_ = 0.0;
};

} // namespace leosched::nn

#endif
