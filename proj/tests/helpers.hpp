#pragma once

#include <vector>

#include "lizard/environment.hpp"
#include "lizard/reward.hpp"

namespace lizard::testing {

inline PiecewiseLinearReward reward_from(std::vector<std::pair<double, double>> pairs) {
    PiecewiseLinearReward f;
    for (const auto& [effort, value] : pairs) f.knots.push_back({effort, value});
    return f;
}

// Small instance with explicit reward functions, unit feature spacing, and a
// uniform grid.
inline ProblemInstance make_instance(std::vector<PiecewiseLinearReward> rewards, double budget,
                                     double gap, double lipschitz = 1.0) {
    ProblemInstance inst;
    inst.budget = budget;
    inst.lipschitz_constant = lipschitz;
    inst.discretization = make_uniform_discretization(gap);
    inst.distance_mode = DistanceMode::euclidean_features;
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        Target t;
        t.features = {static_cast<double>(i), 0.0};
        t.reward = std::move(rewards[i]);
        inst.targets.push_back(std::move(t));
    }
    compute_distance_matrix(inst);
    return inst;
}

}  // namespace lizard::testing
