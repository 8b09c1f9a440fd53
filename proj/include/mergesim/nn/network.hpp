#pragma once
#include <string>
#include <vector>

#include "mergesim/rng.hpp"

namespace mergesim::nn {

// Feed-forward value network: linear layers with rectified-linear hidden
// activations and a linear output. Double precision throughout; forward and
// backward passes run on the kernels in kernels.hpp and are deterministic
// for any thread count.
class QNetwork {
  public:
    struct Layer {
        int in = 0;
        int out = 0;
        std::vector<double> W; // out x in, row-major
        std::vector<double> b; // out
    };

    QNetwork() = default;
    explicit QNetwork(const std::vector<int>& dims); // e.g. {29, 512, 512, 5}

    // He-uniform weights, zero biases.
    void init_he_uniform(Rng& rng);

    int input_size() const { return layers_.empty() ? 0 : layers_.front().in; }
    int output_size() const { return layers_.empty() ? 0 : layers_.back().out; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }
    long parameter_count() const;

    std::vector<double> forward(const std::vector<double>& x) const;
    // X is batch x in row-major; returns batch x out row-major.
    std::vector<double> forward_batch(const double* X, int batch) const;

    bool same_shape(const QNetwork& other) const;

  private:
    std::vector<Layer> layers_;
};

struct Gradients {
    std::vector<std::vector<double>> W;
    std::vector<std::vector<double>> b;

    static Gradients zeros_like(const QNetwork& net);
};

// Mean Huber loss (delta = huber_delta) of Q(obs, action) against target,
// with gradients for every parameter. Only the taken action's output carries
// gradient. Returns the loss.
double dqn_loss_and_grads(const QNetwork& net, const double* obs_batch, const int* actions,
                          const double* targets, int batch, double huber_delta, Gradients& grads);

struct AdamState {
    std::vector<std::vector<double>> mW, vW, mb, vb;
    long t = 0;

    static AdamState zeros_like(const QNetwork& net);
};

struct AdamParams {
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

void adam_update(QNetwork& net, const Gradients& grads, AdamState& state, const AdamParams& params);

// Versioned binary checkpoint: magic, version, dtype, layer shapes, then
// row-major parameter blocks, little-endian.
void save_checkpoint(const std::string& path, const QNetwork& net);
QNetwork load_checkpoint(const std::string& path);

} // namespace mergesim::nn
