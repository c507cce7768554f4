#pragma once

// Fully connected network: leaky-ReLU hidden layers, linear head.

#include <Eigen/Dense>

#include <random>
#include <span>
#include <vector>

namespace grl {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kLeakySlope = 0.01;

struct DenseLayer {
    RowMatrix weight;  // out x in
    Eigen::VectorXd bias;

    friend bool operator==(const DenseLayer& a, const DenseLayer& b) {
        return a.weight == b.weight && a.bias == b.bias;
    }
};

class Mlp {
public:
    Mlp() = default;
    /// Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    Mlp(int input, std::span<const int> hidden, int output, std::mt19937_64& rng);

    int input_size() const;
    int output_size() const;
    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::size_t parameter_count() const;

    /// Single-sample forward pass on the dispatched dot kernel.
    std::vector<double> forward(std::span<const double> x) const;

    struct Cache {
        std::vector<RowMatrix> inputs;  // input to layer l, batch x in
        std::vector<RowMatrix> pre;     // pre-activation of layer l, batch x out
    };
    /// Batched forward pass, rows are samples. Fills `cache` when given.
    RowMatrix forward_batch(const RowMatrix& x, Cache* cache = nullptr) const;
    /// Gradients of sum(d_out .* output) w.r.t. every layer, shaped like layers().
    std::vector<DenseLayer> backward(const Cache& cache, const RowMatrix& d_out) const;

    friend bool operator==(const Mlp&, const Mlp&) = default;

private:
    std::vector<DenseLayer> layers_;
};

/// Adam with bias correction; state is shaped like the network it updates.
class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void step(Mlp& net, const std::vector<DenseLayer>& grads);
    long steps() const { return t_; }

private:
    double lr_ = 1e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    std::vector<DenseLayer> m_, v_;
};

}  // namespace grl
