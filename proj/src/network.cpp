#include "mergesim/nn/network.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mergesim/nn/kernels.hpp"

namespace mergesim::nn {

QNetwork::QNetwork(const std::vector<int>& dims) {
    if (dims.size() < 2) throw std::invalid_argument("QNetwork: need at least input and output dims");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("QNetwork: dims must be positive");
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        Layer layer;
        layer.in = dims[i];
        layer.out = dims[i + 1];
        layer.W.assign(static_cast<std::size_t>(layer.in) * layer.out, 0.0);
        layer.b.assign(layer.out, 0.0);
        layers_.push_back(std::move(layer));
    }
}

void QNetwork::init_he_uniform(Rng& rng) {
    for (Layer& layer : layers_) {
        const double limit = std::sqrt(6.0 / layer.in);
        for (double& w : layer.W) w = rng.uniform(-limit, limit);
        for (double& b : layer.b) b = 0.0;
    }
}

long QNetwork::parameter_count() const {
    long n = 0;
    for (const Layer& layer : layers_) n += static_cast<long>(layer.W.size()) + layer.b.size();
    return n;
}

bool QNetwork::same_shape(const QNetwork& other) const {
    if (layers_.size() != other.layers_.size()) return false;
    for (std::size_t i = 0; i < layers_.size(); ++i)
        if (layers_[i].in != other.layers_[i].in || layers_[i].out != other.layers_[i].out)
            return false;
    return true;
}

std::vector<double> QNetwork::forward(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != input_size())
        throw std::invalid_argument("QNetwork::forward: input length mismatch");
    const std::vector<double> out = forward_batch(x.data(), 1);
    return out;
}

std::vector<double> QNetwork::forward_batch(const double* X, int batch) const {
    std::vector<double> cur(X, X + static_cast<long>(batch) * input_size());
    std::vector<double> next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        next.assign(static_cast<std::size_t>(batch) * layer.out, 0.0);
        par::linear_forward(layer.W.data(), layer.b.data(), cur.data(), next.data(), batch,
                            layer.in, layer.out);
        if (l + 1 < layers_.size())
            par::relu_forward(next.data(), next.data(), static_cast<long>(batch) * layer.out);
        cur.swap(next);
    }
    return cur;
}

Gradients Gradients::zeros_like(const QNetwork& net) {
    Gradients g;
    for (const auto& layer : net.layers()) {
        g.W.emplace_back(layer.W.size(), 0.0);
        g.b.emplace_back(layer.b.size(), 0.0);
    }
    return g;
}

double dqn_loss_and_grads(const QNetwork& net, const double* obs_batch, const int* actions,
                          const double* targets, int batch, double huber_delta, Gradients& grads) {
    const auto& layers = net.layers();
    if (layers.empty()) throw std::invalid_argument("dqn_loss_and_grads: empty network");
    if (batch <= 0) throw std::invalid_argument("dqn_loss_and_grads: empty batch");

    // forward, keeping pre-activations and activations per layer
    std::vector<std::vector<double>> acts;   // acts[0] = input, acts[l+1] = layer l output
    std::vector<std::vector<double>> preact; // preact[l] = pre-ReLU output of layer l
    acts.emplace_back(obs_batch, obs_batch + static_cast<long>(batch) * layers[0].in);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        std::vector<double> z(static_cast<std::size_t>(batch) * layer.out);
        par::linear_forward(layer.W.data(), layer.b.data(), acts[l].data(), z.data(), batch,
                            layer.in, layer.out);
        preact.push_back(z);
        if (l + 1 < layers.size())
            par::relu_forward(z.data(), z.data(), static_cast<long>(z.size()));
        acts.push_back(std::move(z));
    }

    // Huber loss on the taken action's value, averaged over the batch
    const int n_out = layers.back().out;
    const std::vector<double>& q = acts.back();
    std::vector<double> d_out(static_cast<std::size_t>(batch) * n_out, 0.0);
    double loss = 0.0;
    for (int b = 0; b < batch; ++b) {
        const int a = actions[b];
        if (a < 0 || a >= n_out) throw std::invalid_argument("dqn_loss_and_grads: action index");
        const double err = q[static_cast<long>(b) * n_out + a] - targets[b];
        const double abs_err = std::abs(err);
        loss += abs_err <= huber_delta ? 0.5 * err * err
                                       : huber_delta * (abs_err - 0.5 * huber_delta);
        const double derr = std::clamp(err, -huber_delta, huber_delta);
        d_out[static_cast<long>(b) * n_out + a] = derr / batch;
    }
    loss /= batch;

    // backward
    if (grads.W.size() != layers.size()) grads = Gradients::zeros_like(net);
    std::vector<double> delta = std::move(d_out);
    for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
        const auto& layer = layers[l];
        par::linear_grad_weights(delta.data(), acts[l].data(), grads.W[l].data(), batch, layer.in,
                                 layer.out);
        par::linear_grad_bias(delta.data(), grads.b[l].data(), batch, layer.out);
        if (l > 0) {
            std::vector<double> d_in(static_cast<std::size_t>(batch) * layer.in);
            par::linear_grad_input(layer.W.data(), delta.data(), d_in.data(), batch, layer.in,
                                   layer.out);
            par::relu_backward(d_in.data(), preact[l - 1].data(), d_in.data(),
                               static_cast<long>(d_in.size()));
            delta = std::move(d_in);
        }
    }
    return loss;
}

AdamState AdamState::zeros_like(const QNetwork& net) {
    AdamState s;
    for (const auto& layer : net.layers()) {
        s.mW.emplace_back(layer.W.size(), 0.0);
        s.vW.emplace_back(layer.W.size(), 0.0);
        s.mb.emplace_back(layer.b.size(), 0.0);
        s.vb.emplace_back(layer.b.size(), 0.0);
    }
    return s;
}

void adam_update(QNetwork& net, const Gradients& grads, AdamState& state, const AdamParams& params) {
    ++state.t;
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        par::adam_step(layers[l].W.data(), grads.W[l].data(), state.mW[l].data(),
                       state.vW[l].data(), static_cast<long>(layers[l].W.size()), params.lr,
                       params.beta1, params.beta2, params.eps, state.t);
        par::adam_step(layers[l].b.data(), grads.b[l].data(), state.mb[l].data(),
                       state.vb[l].data(), static_cast<long>(layers[l].b.size()), params.lr,
                       params.beta1, params.beta2, params.eps, state.t);
    }
}

namespace {
constexpr char kMagic[4] = {'M', 'S', 'Q', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return value;
}
} // namespace

void save_checkpoint(const std::string& path, const QNetwork& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(kMagic, 4);
    write_raw(out, kVersion);
    write_raw(out, static_cast<std::uint8_t>(sizeof(double)));
    write_raw(out, static_cast<std::uint8_t>(net.layers().size()));
    for (const auto& layer : net.layers()) {
        write_raw(out, static_cast<std::uint32_t>(layer.in));
        write_raw(out, static_cast<std::uint32_t>(layer.out));
    }
    for (const auto& layer : net.layers()) {
        out.write(reinterpret_cast<const char*>(layer.W.data()),
                  static_cast<std::streamsize>(layer.W.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(layer.b.data()),
                  static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

QNetwork load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
    const auto version = read_raw<std::uint32_t>(in);
    if (version != kVersion)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    const auto dtype = read_raw<std::uint8_t>(in);
    if (dtype != sizeof(double)) throw std::runtime_error("checkpoint: unsupported dtype");
    const auto n_layers = read_raw<std::uint8_t>(in);
    std::vector<int> dims;
    std::vector<std::pair<int, int>> shapes;
    for (int l = 0; l < n_layers; ++l) {
        const auto lin = read_raw<std::uint32_t>(in);
        const auto lout = read_raw<std::uint32_t>(in);
        shapes.emplace_back(static_cast<int>(lin), static_cast<int>(lout));
        if (l == 0) dims.push_back(static_cast<int>(lin));
        dims.push_back(static_cast<int>(lout));
    }
    QNetwork net(dims);
    for (int l = 0; l < n_layers; ++l) {
        auto& layer = net.layers()[l];
        if (layer.in != shapes[l].first || layer.out != shapes[l].second)
            throw std::runtime_error("checkpoint: inconsistent layer shapes");
        in.read(reinterpret_cast<char*>(layer.W.data()),
                static_cast<std::streamsize>(layer.W.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(layer.b.data()),
                static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
        if (!in) throw std::runtime_error("checkpoint: truncated parameter block");
    }
    return net;
}

} // namespace mergesim::nn
