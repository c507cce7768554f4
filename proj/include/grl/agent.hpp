#pragma once

// Double deep Q-network learner: epsilon-greedy behaviour policy, FIFO
// replay, and the double-Q Bellman target with smooth-L1 loss.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "grl/mlp.hpp"

namespace grl {

enum class GammaMode { Fixed, Annealed };

struct AgentConfig {
    int batch_size = 1000;
    int memory_capacity = 20000;
    std::vector<int> hidden{1000, 1000, 1000, 1000, 1000};
    double dropout = 0.0;
    double learning_rate = 1e-4;
    int target_update_period = 500;
    double gamma = 0.88;
    GammaMode gamma_mode = GammaMode::Fixed;
    /// Annealed mode: gamma_t = final + (gamma - final) * decay^t.
    double gamma_final = 5e-3;
    double gamma_decay = 0.99995;
    double epsilon_decay = 0.99995;
    double epsilon_min = 0.05;
    std::uint64_t rng_seed = 0;
};

/// 5 x 1000 network, batch 1000, memory 20000.
AgentConfig paper_agent_config();
/// 2 x 64 network with a proportionally smaller batch and memory for CI runs.
AgentConfig ci_agent_config();

double epsilon_at(const AgentConfig& config, long step);
double gamma_at(const AgentConfig& config, long step);

/// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double smooth_l1(double x);
double smooth_l1_derivative(double x);

struct ReplayTransition {
    std::vector<std::uint8_t> observation;
    int action = 0;
    double reward = 0.0;
    std::vector<std::uint8_t> next_observation;
    bool done = false;
};

/// Fixed-capacity ring; once full, each push overwrites the oldest entry.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity);

    void push(ReplayTransition t);
    void clear();
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// i = 0 is the oldest stored transition.
    const ReplayTransition& operator[](std::size_t i) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next slot to overwrite once full
    std::vector<ReplayTransition> items_;
};

class DdqnAgent {
public:
    DdqnAgent(AgentConfig config, int observation_size, int num_actions);

    const AgentConfig& config() const { return config_; }
    int observation_size() const { return obs_size_; }
    int num_actions() const { return num_actions_; }

    /// Behaviour policy at the current schedule; advances the step counter.
    int act(std::span<const std::uint8_t> obs);
    /// Greedy with probability 1 - epsilon (ties to the lowest index), else uniform.
    int select_action(std::span<const std::uint8_t> obs, double epsilon);
    int greedy_action(std::span<const std::uint8_t> obs) const;
    std::vector<double> q_values(std::span<const std::uint8_t> obs) const;

    long steps() const { return steps_; }
    double epsilon() const { return epsilon_at(config_, steps_); }
    double gamma() const { return gamma_at(config_, steps_); }

    void remember(ReplayTransition t);
    /// One update on a uniformly sampled batch; nullopt while memory < batch size.
    std::optional<double> train_step();
    /// One Adam update on `batch` at the current discount; returns the loss before the update.
    double train_on(std::span<const ReplayTransition* const> batch);

    /// r, or r + gamma * Q_target(s', argmax_a Q_policy(s', a)) when not done.
    double ddqn_target(const ReplayTransition& t, double gamma) const;
    /// Mean smooth-L1 of Q_policy(s, a) - Y over `batch`; fills policy gradients when asked.
    double loss(std::span<const ReplayTransition* const> batch, double gamma,
                std::vector<DenseLayer>* grads = nullptr) const;

    void sync_target() { target_ = policy_; }
    long updates() const { return updates_; }

    /// Fresh networks for the new sizes, empty memory, restarted schedules.
    void extend_action_space(int observation_size, int num_actions);

    Mlp& policy() { return policy_; }
    const Mlp& policy() const { return policy_; }
    Mlp& target() { return target_; }
    const Mlp& target() const { return target_; }
    const ReplayMemory& memory() const { return memory_; }

private:
    void build_networks();

    AgentConfig config_;
    int obs_size_;
    int num_actions_;
    std::mt19937_64 rng_;
    Mlp policy_;
    Mlp target_;
    Adam adam_;
    ReplayMemory memory_;
    long steps_ = 0;
    long updates_ = 0;
};

}  // namespace grl
