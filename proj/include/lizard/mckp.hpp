#pragma once

#include <vector>

#include "lizard/reward.hpp"

namespace lizard {

// Multiple-choice knapsack: pick exactly one level per target, total cost
// within budget, maximizing total value. Costs are integer budget units
// (one unit = the minimum discretization gap).
struct MckpInstance {
    // n_targets x num_levels; +infinity marks an arm that must dominate any
    // all-finite selection (optimism for unexplored arms).
    std::vector<std::vector<double>> values;
    std::vector<int> level_costs;  // per level, non-decreasing, level 0 costs 0
    int budget_units = 0;
};

struct MckpSolution {
    double objective = 0.0;
    std::vector<int> levels;  // chosen level index per target
};

// Builds costs from a uniform grid by expressing each level in units of the
// minimum gap. Throws std::invalid_argument when some level is not an
// integer multiple of the gap.
MckpInstance make_mckp(const Discretization& grid, std::vector<std::vector<double>> values,
                       double budget);

// Exact DP over (target, remaining units). Ties break to the lowest target
// index, then the lowest level index, so repeated runs select identical
// assignments. Infinite values are replaced by a sentinel larger than any
// finite total before solving; the returned objective uses the substituted
// values.
MckpSolution solve_mckp(const MckpInstance& m);

// Exhaustive reference with the same tie-break. Refuses instances with more
// than 10^6 assignments.
MckpSolution brute_force_mckp(const MckpInstance& m);

}  // namespace lizard
