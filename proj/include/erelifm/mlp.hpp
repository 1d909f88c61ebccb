#pragma once

#include <string>
#include <vector>

#include "erelifm/rng.hpp"
#include "erelifm/tensor.hpp"

namespace erelifm {

// Feed-forward MLP with rectifier hidden units and identity output,
// carrying its own gradient buffers. Forward caches the activations the
// backward pass needs.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<size_t> layer_sizes);

    // scaled uniform fan-in init, scale 1/sqrt(fan_in)
    static Mlp random(std::vector<size_t> layer_sizes, Rng& rng);

    size_t input_size() const { return sizes_.front(); }
    size_t output_size() const { return sizes_.back(); }
    const std::vector<size_t>& layer_sizes() const { return sizes_; }

    // Forward pass that caches activations for backward.
    Matrix forward(const Matrix& batch);
    // Forward pass without caching (evaluation only).
    Matrix forward_eval(const Matrix& batch) const;

    // Fills gradient buffers from the cached forward pass. upstream is
    // dLoss/dOutput, shape B x output_size. Consumes the cache.
    void backward(const Matrix& upstream);

    void zero_grad();

    // Flat parameter view: weights then biases, layer by layer.
    size_t param_count() const;
    double get_param(size_t i) const;
    void set_param(size_t i, double v);
    double get_grad(size_t i) const;

    std::vector<double> params_flat() const;
    void set_params_flat(const std::vector<double>& p);
    std::vector<double> grads_flat() const;

    // p[i] -= lr * g[i] for externally supplied g
    void apply_update(const std::vector<double>& grad, double lr);

    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

    struct Layer {
        Matrix w;                // out x in
        std::vector<double> b;   // out
    };
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& grads() const { return grads_; }

private:
    std::vector<size_t> sizes_;
    std::vector<Layer> layers_;
    std::vector<Layer> grads_;

    // cache: acts_[0] is the input batch, acts_[i] the post-activation of
    // layer i; pre_[i] the pre-activation of layer i
    std::vector<Matrix> acts_;
    std::vector<Matrix> pre_;
    bool cached_ = false;
};

}  // namespace erelifm
