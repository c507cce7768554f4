#pragma once

// Derivative-free minimization by linear-model trust regions over a moving
// simplex (the unconstrained case of Powell's COBYLA).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace grl {

using CostFunction = std::function<double(std::span<const double>)>;

struct OptimizerBudget {
    int max_evaluations = 1000;
    /// Empty means all zeros.
    std::vector<double> initial_point;
    /// The method is deterministic; the seed is carried for interface symmetry with stochastic substitutes.
    std::uint64_t rng_seed = 0;
    double rhobeg = 1.0;
    double rhoend = 1e-6;
};

struct OptimizeResult {
    std::vector<double> x;
    double best_cost = 0.0;
    int evaluations = 0;
    /// trace[i] is the best cost seen after evaluation i + 1 (non-increasing).
    std::vector<double> trace;
};

/// Returns the best point ever evaluated, so best_cost <= cost(initial_point).
OptimizeResult minimize(const CostFunction& cost, std::size_t dim, const OptimizerBudget& budget = {});

}  // namespace grl
