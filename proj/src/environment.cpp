#include "grl/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grl/param_optimizer.hpp"
#include "grl/statevector.hpp"

namespace grl {

ActionTable build_action_table(int num_qubits, std::span<const GateKind> kinds, std::span<const GadgetDef> gadgets) {
    if (num_qubits < 1) throw std::invalid_argument("action table needs at least one qubit");
    ActionTable table;
    for (GateKind k : kinds) {
        if (kind_arity(k) != 2) continue;
        for (int a = 0; a < num_qubits; ++a) {
            for (int b = 0; b < num_qubits; ++b) {
                if (a == b || (k == GateKind::CZ && b < a)) continue;
                table.push_back({k, {a, b}, 2, -1, 0});
            }
        }
    }
    for (GateKind k : kinds) {
        if (kind_arity(k) != 1) continue;
        for (int q = 0; q < num_qubits; ++q) table.push_back({k, {q, 0}, 1, -1, kind_is_parameterized(k) ? 1 : 0});
    }
    for (std::size_t id = 0; id < gadgets.size(); ++id) {
        const GadgetDef& g = gadgets[id];
        if (g.arity == 1) {
            for (int q = 0; q < num_qubits; ++q)
                table.push_back({GateKind::Gadget, {q, 0}, 1, static_cast<int>(id), g.angle_slots});
        } else if (g.arity == 2) {
            for (int a = 0; a < num_qubits; ++a) {
                for (int b = 0; b < num_qubits; ++b) {
                    if (a != b) table.push_back({GateKind::Gadget, {a, b}, 2, static_cast<int>(id), g.angle_slots});
                }
            }
        } else {
            throw std::invalid_argument("gadget arity must be 1 or 2");
        }
    }
    return table;
}

EpisodeConfig make_tfim_episode(const TfimSpec& spec, std::span<const GateKind> kinds, const GadgetLibrary& gadgets,
                                int t_max) {
    EpisodeConfig cfg;
    cfg.t_max = t_max;
    cfg.hamiltonian = build_tfim(spec);
    cfg.fake_min = fake_minimum_energy(spec);
    cfg.gadgets = gadgets;
    cfg.actions = build_action_table(spec.num_qubits, kinds, gadgets);
    cfg.encoding = extend_for_gadgets(make_encoding_spec(spec.num_qubits, kinds, t_max), gadgets);
    return cfg;
}

Environment::Environment(EpisodeConfig config) : config_(std::move(config)), circuit_(config_.hamiltonian.num_qubits) {
    if (config_.t_max < 1) throw std::invalid_argument("t_max must be positive");
    if (config_.reward_magnitude <= 0.0) throw std::invalid_argument("reward magnitude must be positive");
    if (config_.encoding.num_qubits != config_.hamiltonian.num_qubits || config_.encoding.t_max != config_.t_max) {
        throw std::invalid_argument("encoding does not match episode");
    }
    if (config_.actions.empty()) throw std::invalid_argument("empty action table");
    for (const GadgetDef& g : config_.gadgets) validate(g);
}

Circuit Environment::bound_circuit() const { return grl::bind(expand_gadgets(circuit_, config_.gadgets), std::span<const double>(params_)); }

void Environment::evaluate() {
    const Circuit flat = expand_gadgets(circuit_, config_.gadgets);
    EnergyEvaluator eval(flat, config_.hamiltonian);
    OptimizerBudget budget;
    budget.max_evaluations = config_.optimizer_evaluations;
    budget.rhobeg = config_.optimizer_rhobeg;
    budget.rhoend = config_.optimizer_rhoend;
    budget.initial_point = params_;
    if (!config_.warm_start) std::fill(budget.initial_point.begin(), budget.initial_point.end(), 0.0);
    const OptimizeResult r =
        minimize([&eval](std::span<const double> x) { return eval(x); }, params_.size(), budget);
    params_ = r.x;
    energy_ = r.best_cost;
    cost_ = std::abs(energy_ - config_.fake_min);
}

StepOutcome Environment::reset() {
    circuit_ = Circuit(config_.hamiltonian.num_qubits);
    params_.clear();
    obs_ = empty_observation(config_.encoding);
    steps_ = 0;
    done_ = false;
    succeeded_ = false;
    evaluate();
    return {obs_, 0.0, false, cost_, energy_, params_};
}

StepOutcome Environment::step(int action_index) {
    if (done_) throw std::logic_error("step after episode end; call reset()");
    if (action_index < 0 || action_index >= num_actions()) throw std::out_of_range("action index out of range");
    const Action& a = config_.actions[static_cast<std::size_t>(action_index)];
    for (int i = 0; i < a.arity; ++i) {
        if (a.qubits[i] < 0 || a.qubits[i] >= circuit_.num_qubits) throw std::out_of_range("action qubit out of range");
    }
    GateInstruction g;
    g.kind = a.kind;
    g.qubits = a.qubits;
    g.arity = a.arity;
    g.gadget = a.gadget;
    for (int s = 0; s < a.angle_slots; ++s) {
        g.params.push_back(Angle::symbol(circuit_.add_parameter()));
        params_.push_back(0.0);
    }
    encode_instruction(obs_, steps_, g, config_.encoding);
    circuit_.append(std::move(g));
    ++steps_;
    evaluate();

    StepOutcome out{obs_, 0.0, false, cost_, energy_, params_};
    if (cost_ < threshold_) {
        out.reward = config_.reward_magnitude;
        out.done = true;
        succeeded_ = true;
    } else if (steps_ >= config_.t_max) {
        out.reward = -config_.reward_magnitude;
        out.done = true;
    }
    done_ = out.done;
    return out;
}

CurriculumState curriculum_init(const CurriculumConfig& config, double fake_min) {
    if (!(config.zeta_init > 0.0)) throw std::invalid_argument("initial threshold must be positive");
    if (config.shift_radius <= 0.0 || config.greedy_period < 1 || config.amortization_every < 1) {
        throw std::invalid_argument("invalid curriculum configuration");
    }
    CurriculumState s;
    s.config = config;
    s.fake_min = fake_min;
    s.amortization = config.amortization;
    s.threshold = config.zeta_init;
    return s;
}

CurriculumState curriculum_update(CurriculumState s, const EpisodeResult& result) {
    const CurriculumConfig& c = s.config;
    ++s.episodes;
    if (result.min_cost < s.zeta_best) {
        s.zeta_best = result.min_cost;
        s.threshold = s.zeta_best + s.amortization;
        s.after_greedy = false;
    }
    if (result.success) {
        ++s.success_count;
        s.failure_streak = 0;
        s.threshold -= s.amortization / c.shift_radius;
        if (s.success_count % c.amortization_every == 0) {
            s.amortization = std::max(s.amortization - c.amortization_step, 0.0);
        }
    } else {
        ++s.failure_streak;
    }
    if (s.episodes % c.greedy_period == 0 && std::isfinite(s.zeta_best)) {
        s.threshold = s.zeta_best;
        s.after_greedy = true;
        s.failure_streak = 0;
    }
    if (s.after_greedy && s.failure_streak >= c.failure_streak_limit) {
        s.threshold = s.zeta_best + s.amortization;
        s.after_greedy = false;
    }
    s.threshold = std::max(s.threshold, c.min_threshold);
    return s;
}

}  // namespace grl
