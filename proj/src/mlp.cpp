#include "grl/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "grl/simd/kernels.hpp"

namespace grl {

namespace {

DenseLayer zeros_like(const DenseLayer& l) {
    return {RowMatrix::Zero(l.weight.rows(), l.weight.cols()), Eigen::VectorXd::Zero(l.bias.size())};
}

}  // namespace

Mlp::Mlp(int input, std::span<const int> hidden, int output, std::mt19937_64& rng) {
    if (input < 1 || output < 1) throw std::invalid_argument("network sizes must be positive");
    int fan_in = input;
    auto add = [&](int out) {
        if (out < 1) throw std::invalid_argument("layer width must be positive");
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-bound, bound);
        DenseLayer l{RowMatrix(out, fan_in), Eigen::VectorXd(out)};
        for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = u(rng);
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = u(rng);
        layers_.push_back(std::move(l));
        fan_in = out;
    };
    for (int h : hidden) add(h);
    add(output);
}

int Mlp::input_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
int Mlp::output_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_size()) throw std::invalid_argument("network input size mismatch");
    const auto& k = simd::kernels();
    std::vector<double> cur(x.begin(), x.end()), next;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        const DenseLayer& l = layers_[li];
        next.resize(static_cast<std::size_t>(l.weight.rows()));
        for (Eigen::Index o = 0; o < l.weight.rows(); ++o) {
            double z = l.bias(o) + k.dot(l.weight.row(o).data(), cur.data(), cur.size());
            if (li + 1 < layers_.size() && z < 0.0) z *= kLeakySlope;
            next[static_cast<std::size_t>(o)] = z;
        }
        cur.swap(next);
    }
    return cur;
}

RowMatrix Mlp::forward_batch(const RowMatrix& x, Cache* cache) const {
    if (x.cols() != input_size()) throw std::invalid_argument("network input size mismatch");
    if (cache != nullptr) {
        cache->inputs.clear();
        cache->pre.clear();
    }
    RowMatrix cur = x;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        const DenseLayer& l = layers_[li];
        RowMatrix z = cur * l.weight.transpose();
        z.rowwise() += l.bias.transpose();
        if (cache != nullptr) {
            cache->inputs.push_back(cur);
            cache->pre.push_back(z);
        }
        if (li + 1 < layers_.size()) z = z.unaryExpr([](double v) { return v < 0.0 ? v * kLeakySlope : v; });
        cur = std::move(z);
    }
    return cur;
}

std::vector<DenseLayer> Mlp::backward(const Cache& cache, const RowMatrix& d_out) const {
    std::vector<DenseLayer> grads(layers_.size());
    RowMatrix delta = d_out;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        if (li + 1 < layers_.size()) {
            delta = delta.cwiseProduct(cache.pre[li].unaryExpr([](double v) { return v < 0.0 ? kLeakySlope : 1.0; }));
        }
        grads[li].weight = delta.transpose() * cache.inputs[li];
        grads[li].bias = delta.colwise().sum().transpose();
        if (li > 0) delta = delta * layers_[li].weight;
    }
    return grads;
}

Adam::Adam(const Mlp& net, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const auto& l : net.layers()) {
        m_.push_back(zeros_like(l));
        v_.push_back(zeros_like(l));
    }
}

void Adam::step(Mlp& net, const std::vector<DenseLayer>& grads) {
    if (grads.size() != m_.size()) throw std::invalid_argument("gradient shape mismatch");
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto update = [&](double* p, double* m, double* v, const double* g, Eigen::Index n) {
        for (Eigen::Index i = 0; i < n; ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
            p[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
        }
    };
    for (std::size_t li = 0; li < grads.size(); ++li) {
        DenseLayer& l = net.layers()[li];
        update(l.weight.data(), m_[li].weight.data(), v_[li].weight.data(), grads[li].weight.data(), l.weight.size());
        update(l.bias.data(), m_[li].bias.data(), v_[li].bias.data(), grads[li].bias.data(), l.bias.size());
    }
}

}  // namespace grl
