#pragma once

#include <string>

#include "lizard/environment.hpp"
#include "lizard/reward.hpp"

namespace lizard {

// Instance documents are JSON with fields n_targets, budget,
// lipschitz_constant, distance_mode, discretization_gap, and per-target
// arrays features and reward_knots.
ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

// History CSV: header timestep,target,effort_level,effort,outcome.
HistoryLog load_history(const std::string& path);
void save_history(const HistoryLog& log, const std::string& path);

}  // namespace lizard
