#include "grl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grl {

namespace {

RowMatrix to_rows(std::span<const ReplayTransition* const> batch, bool next, int width) {
    RowMatrix x(static_cast<Eigen::Index>(batch.size()), width);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& o = next ? batch[i]->next_observation : batch[i]->observation;
        if (static_cast<int>(o.size()) != width) throw std::invalid_argument("observation size mismatch");
        for (int j = 0; j < width; ++j) x(static_cast<Eigen::Index>(i), j) = o[static_cast<std::size_t>(j)];
    }
    return x;
}

int argmax_row(const RowMatrix& q, Eigen::Index row) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < q.cols(); ++j) {
        if (q(row, j) > q(row, best)) best = j;
    }
    return static_cast<int>(best);
}

}  // namespace

AgentConfig paper_agent_config() { return {}; }

AgentConfig ci_agent_config() {
    AgentConfig c;
    c.hidden = {64, 64};
    c.batch_size = 64;
    c.memory_capacity = 5000;
    c.learning_rate = 1e-3;
    c.target_update_period = 200;
    return c;
}

double epsilon_at(const AgentConfig& c, long step) {
    return std::max(c.epsilon_min, std::pow(c.epsilon_decay, static_cast<double>(step)));
}

double gamma_at(const AgentConfig& c, long step) {
    if (c.gamma_mode == GammaMode::Fixed) return c.gamma;
    return c.gamma_final + (c.gamma - c.gamma_final) * std::pow(c.gamma_decay, static_cast<double>(step));
}

double smooth_l1(double x) {
    const double a = std::abs(x);
    return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1_derivative(double x) { return std::clamp(x, -1.0, 1.0); }

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayMemory::push(ReplayTransition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        return;
    }
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

void ReplayMemory::clear() {
    items_.clear();
    head_ = 0;
}

const ReplayTransition& ReplayMemory::operator[](std::size_t i) const {
    if (i >= items_.size()) throw std::out_of_range("replay index out of range");
    return items_[(head_ + i) % items_.size()];
}

DdqnAgent::DdqnAgent(AgentConfig config, int observation_size, int num_actions)
    : config_(std::move(config)),
      obs_size_(observation_size),
      num_actions_(num_actions),
      rng_(config_.rng_seed),
      memory_(static_cast<std::size_t>(std::max(config_.memory_capacity, 1))) {
    if (config_.batch_size < 1 || config_.memory_capacity < config_.batch_size) {
        throw std::invalid_argument("need 1 <= batch_size <= memory_capacity");
    }
    if (config_.dropout != 0.0) throw std::invalid_argument("dropout is not supported");
    if (config_.target_update_period < 1) throw std::invalid_argument("target_update_period must be positive");
    if (config_.gamma < 0.0 || config_.gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
    build_networks();
}

void DdqnAgent::build_networks() {
    policy_ = Mlp(obs_size_, config_.hidden, num_actions_, rng_);
    target_ = policy_;
    adam_ = Adam(policy_, config_.learning_rate);
}

std::vector<double> DdqnAgent::q_values(std::span<const std::uint8_t> obs) const {
    if (static_cast<int>(obs.size()) != obs_size_) throw std::invalid_argument("observation size mismatch");
    const std::vector<double> x(obs.begin(), obs.end());
    return policy_.forward(x);
}

int DdqnAgent::greedy_action(std::span<const std::uint8_t> obs) const {
    const std::vector<double> q = q_values(obs);
    return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

int DdqnAgent::select_action(std::span<const std::uint8_t> obs, double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (u < epsilon) return std::uniform_int_distribution<int>(0, num_actions_ - 1)(rng_);
    return greedy_action(obs);
}

int DdqnAgent::act(std::span<const std::uint8_t> obs) {
    const int a = select_action(obs, epsilon());
    ++steps_;
    return a;
}

void DdqnAgent::remember(ReplayTransition t) {
    if (static_cast<int>(t.observation.size()) != obs_size_ ||
        static_cast<int>(t.next_observation.size()) != obs_size_) {
        throw std::invalid_argument("transition observation does not match the encoding");
    }
    if (t.action < 0 || t.action >= num_actions_) throw std::invalid_argument("transition action out of range");
    memory_.push(std::move(t));
}

double DdqnAgent::ddqn_target(const ReplayTransition& t, double gamma) const {
    if (t.done || gamma == 0.0) return t.reward;
    const std::vector<double> x(t.next_observation.begin(), t.next_observation.end());
    const std::vector<double> qp = policy_.forward(x);
    const auto a = static_cast<std::size_t>(std::max_element(qp.begin(), qp.end()) - qp.begin());
    return t.reward + gamma * target_.forward(x)[a];
}

double DdqnAgent::loss(std::span<const ReplayTransition* const> batch, double gamma,
                       std::vector<DenseLayer>* grads) const {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    const auto b = static_cast<Eigen::Index>(batch.size());
    const RowMatrix next = to_rows(batch, true, obs_size_);
    const RowMatrix q_next_policy = policy_.forward_batch(next);
    const RowMatrix q_next_target = target_.forward_batch(next);
    Mlp::Cache cache;
    const RowMatrix q = policy_.forward_batch(to_rows(batch, false, obs_size_), &cache);

    RowMatrix d_out = RowMatrix::Zero(b, q.cols());
    double total = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
        const ReplayTransition& t = *batch[static_cast<std::size_t>(i)];
        double y = t.reward;
        if (!t.done && gamma != 0.0) y += gamma * q_next_target(i, argmax_row(q_next_policy, i));
        const double diff = q(i, t.action) - y;
        total += smooth_l1(diff);
        d_out(i, t.action) = smooth_l1_derivative(diff) / static_cast<double>(b);
    }
    if (grads != nullptr) *grads = policy_.backward(cache, d_out);
    return total / static_cast<double>(b);
}

double DdqnAgent::train_on(std::span<const ReplayTransition* const> batch) {
    std::vector<DenseLayer> grads;
    const double l = loss(batch, gamma(), &grads);
    adam_.step(policy_, grads);
    ++updates_;
    if (updates_ % config_.target_update_period == 0) sync_target();
    return l;
}

std::optional<double> DdqnAgent::train_step() {
    if (memory_.size() < static_cast<std::size_t>(config_.batch_size)) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, memory_.size() - 1);
    std::vector<const ReplayTransition*> batch(static_cast<std::size_t>(config_.batch_size));
    for (auto& p : batch) p = &memory_[pick(rng_)];
    return train_on(batch);
}

void DdqnAgent::extend_action_space(int observation_size, int num_actions) {
    obs_size_ = observation_size;
    num_actions_ = num_actions;
    build_networks();
    memory_.clear();
    steps_ = 0;
    updates_ = 0;
}

}  // namespace grl
