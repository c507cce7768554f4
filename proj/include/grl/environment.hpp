#pragma once

// Episodic circuit-building environment and the curriculum threshold
// controller that sets its success bar.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "grl/circuit.hpp"
#include "grl/encoding.hpp"
#include "grl/hamiltonian.hpp"

namespace grl {

/// One placeable gate: a kind (or gadget id) on fixed qubits.
struct Action {
    GateKind kind = GateKind::X;
    std::array<int, 2> qubits{0, 0};
    int arity = 1;
    int gadget = -1;
    int angle_slots = 0;

    friend bool operator==(const Action&, const Action&) = default;
};

using ActionTable = std::vector<Action>;

/// Order: two-qubit kinds, then one-qubit kinds (per qubit), then gadgets.
/// CZ is symmetric and placed once per unordered pair (i < j); CX and
/// two-qubit gadgets take every ordered pair.
ActionTable build_action_table(int num_qubits, std::span<const GateKind> kinds,
                               std::span<const GadgetDef> gadgets = {});

struct EpisodeConfig {
    int t_max = 20;
    double reward_magnitude = 5.0;
    PauliHamiltonian hamiltonian;
    /// Target energy mu; cost is |E - mu|.
    double fake_min = 0.0;
    ActionTable actions;
    EncodingSpec encoding;
    GadgetLibrary gadgets;
    int optimizer_evaluations = 1000;
    double optimizer_rhobeg = 1.0;
    double optimizer_rhoend = 1e-6;
    /// Carry optimized angles into the next step's starting point.
    bool warm_start = true;
};

/// Builds the standard TFIM episode: native or universal kinds plus gadgets.
EpisodeConfig make_tfim_episode(const TfimSpec& spec, std::span<const GateKind> kinds, const GadgetLibrary& gadgets,
                                int t_max);

struct StepOutcome {
    CircuitObservation observation;
    double reward = 0.0;
    bool done = false;
    double cost = 0.0;
    double energy = 0.0;
    std::vector<double> optimized_params;
};

class Environment {
public:
    explicit Environment(EpisodeConfig config);

    StepOutcome reset();
    StepOutcome step(int action_index);

    void set_threshold(double zeta) { threshold_ = zeta; }
    double threshold() const { return threshold_; }

    const EpisodeConfig& config() const { return config_; }
    int num_actions() const { return static_cast<int>(config_.actions.size()); }
    int steps() const { return steps_; }
    bool done() const { return done_; }
    bool succeeded() const { return succeeded_; }

    /// Symbolic circuit as built by the agent (may contain gadget calls).
    const Circuit& circuit() const { return circuit_; }
    const std::vector<double>& params() const { return params_; }
    double cost() const { return cost_; }
    double energy() const { return energy_; }
    /// Gadgets expanded and the current optimum bound in.
    Circuit bound_circuit() const;

private:
    void evaluate();

    EpisodeConfig config_;
    double threshold_ = 5e-3;
    Circuit circuit_;
    std::vector<double> params_;
    CircuitObservation obs_;
    double cost_ = 0.0;
    double energy_ = 0.0;
    int steps_ = 0;
    bool done_ = true;
    bool succeeded_ = false;
};

struct CurriculumConfig {
    double zeta_init = 5e-3;
    double amortization = 1e-4;
    double amortization_step = 1e-5;
    int amortization_every = 50;
    double shift_radius = 500.0;
    int greedy_period = 2000;
    int failure_streak_limit = 100;
    double min_threshold = 1e-14;
};

struct EpisodeResult {
    double min_cost = 0.0;
    bool success = false;
};

struct CurriculumState {
    CurriculumConfig config;
    double fake_min = 0.0;
    /// Lowest cost seen so far; unset (infinite) until the first episode.
    double zeta_best = std::numeric_limits<double>::infinity();
    double amortization = 1e-4;
    int episodes = 0;
    int success_count = 0;
    int failure_streak = 0;
    double threshold = 5e-3;
    bool after_greedy = false;
};

CurriculumState curriculum_init(const CurriculumConfig& config, double fake_min);

/// Applies, in order: new-best reset to zeta_best + delta; success decrement
/// delta/kappa (and delta shrink every `amortization_every` successes);
/// greedy shift to zeta_best every G episodes; backtrack to zeta_best + delta
/// after `failure_streak_limit` failures following a greedy shift.
CurriculumState curriculum_update(CurriculumState state, const EpisodeResult& result);

}  // namespace grl
