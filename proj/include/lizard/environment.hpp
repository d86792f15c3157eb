#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lizard/reward.hpp"
#include "lizard/rng.hpp"

namespace lizard {

// One patrol observation. effort_level indexes the discretization the play
// was made on; it is -1 for off-grid plays (continuous-effort policies),
// which never enter grid statistics.
struct ObservationRecord {
    int target = 0;
    int effort_level = 0;
    double effort = 0.0;
    int outcome = 0;
    long timestep = 0;
};

// Pre-deployment observations; timesteps are negative by convention.
struct HistoryLog {
    std::vector<ObservationRecord> records;
};

// One super arm: an effort per target, total within budget. levels holds the
// per-target index into the grid the assignment was built on and is empty
// when the efforts are off-grid.
struct EffortAssignment {
    std::vector<int> levels;
    std::vector<double> efforts;

    double total_effort() const;
};

EffortAssignment assignment_from_levels(const Discretization& grid, std::vector<int> levels);

bool is_feasible(const ProblemInstance& inst, const EffortAssignment& a);

// Exact expected composite reward: sum over targets of mu_i(beta_i).
double expected_reward(const ProblemInstance& inst, const EffortAssignment& a);

// One Bernoulli outcome per target with mean mu_i(beta_i), independent across
// targets. Throws std::invalid_argument when the assignment is infeasible.
std::vector<ObservationRecord> sample_round(const ProblemInstance& inst,
                                            const EffortAssignment& a, Rng& rng, long timestep);

struct SyntheticSpec {
    int n_targets = 25;
    std::uint64_t seed = 0;
    double budget = 1.0;
    double gap = 0.25;
    // Segment-count range per reward function; a function with s segments has
    // s - 1 interior knots.
    int min_segments = 4;
    int max_segments = 6;
    double lipschitz_constant = 1.0;
    // Hard bound on segment slopes; infinity leaves the random partition
    // untouched. The default keeps every function 1-Lipschitz in effort.
    double slope_cap = 1.0;
};

// Random monotone piecewise-linear rewards through the origin, saturating at
// mu(1) uniform in [0.2, 1.0], with every segment slope capped at the
// instance Lipschitz constant. Feature 0 is the accessibility coordinate used
// by the biased history generator. distance_mode is reward_sup_distance.
ProblemInstance generate_synthetic_instance(const SyntheticSpec& spec);

// `horizon` pseudo-timesteps of pre-deployment patrols. Each step draws a
// budget-feasible assignment, selecting targets with probability proportional
// to exp(bias_weight * accessibility) and uniform affordable nonzero levels,
// then samples outcomes. Timesteps run -horizon..-1.
HistoryLog generate_historical_data(const ProblemInstance& inst, int horizon, double bias_weight,
                                    Rng& rng);

struct OptimalResult {
    double value = 0.0;
    EffortAssignment assignment;
    double grid_step = 0.0;
    // The grid optimum is within n_targets * L * grid_step of the continuous
    // optimum; reported, not asserted.
    double continuity_error_bound = 0.0;
};

// Exact maximum of the true expected reward over efforts restricted to the
// grid {0, grid_step, ..., 1}, via dynamic programming over integer budget
// units. Requires grid_step to divide both 1 and the budget within tolerance.
OptimalResult compute_optimal(const ProblemInstance& inst, double grid_step);

// Default grid: a quarter of the instance's discretization gap.
OptimalResult compute_optimal(const ProblemInstance& inst);

}  // namespace lizard
