#pragma once

#include <span>
#include <vector>

#include "lizard/environment.hpp"
#include "lizard/reward.hpp"

namespace lizard {

// Statistics of one (target, nonzero effort level) arm. Historical data is
// folded into a single pseudo-pull: warm_mean seeds the mean with weight one,
// and the confidence radius counts it as one pull. warm_pulls keeps the raw
// historical count for the naive-counting comparison mode only.
struct ArmStats {
    long online_pulls = 0;
    double cumulative_reward = 0.0;
    bool warm_started = false;
    double warm_mean = 0.0;
    long warm_pulls = 0;
};

enum class RadiusMode {
    theory,   // sqrt(3 ln t / 2n)
    epsilon,  // sqrt(eps / 2n), horizon-independent
};

// Direction of the zero-slack side of the effort term when monotonicity is
// on. With non-decreasing rewards an arm soundly caps every lower-effort arm
// of its target at zero slack (bound_lower). bound_higher is the mirror
// image, kept only for comparison runs.
enum class MonotoneSlack { bound_lower, bound_higher };

struct UcbParams {
    RadiusMode radius_mode = RadiusMode::epsilon;
    double epsilon = 0.1;
    double lipschitz_constant = 1.0;
    bool use_monotonicity = true;
    bool use_zero_anchor = true;
    bool use_cross_target = true;
    MonotoneSlack monotone_slack = MonotoneSlack::bound_lower;
    // Test-only: count historical pulls in the radius (and the mean at their
    // full weight) as if they had happened online.
    bool naive_history_counting = false;
};

// Per-arm pull counts and rewards for one policy grid. Level 0 is the known
// zero-reward anchor and is not tracked.
struct StatTable {
    int n_targets = 0;
    Discretization grid;
    std::vector<ArmStats> stats;  // n_targets x num_tracked, row-major

    ArmStats& at(int target, int level);
    const ArmStats& at(int target, int level) const;
};

StatTable make_stat_table(int n_targets, Discretization grid);

// Optimism bonus half-width; +infinity for an arm with no countable pulls.
double confidence_radius(const ArmStats& stats, double t, const UcbParams& params);

// Empirical mean plus confidence radius, from the arm's own samples only.
double self_ucb(const ArmStats& stats, double t, const UcbParams& params);

// Folds history into the table: arms with at least one nonzero-effort record
// get warm_mean = historical success frequency. Online pull counts are never
// modified. Records whose effort does not match a grid level are skipped.
void warm_start(StatTable& table, const HistoryLog& history);

// Ingests one round of observations. Zero-effort records are discarded;
// records referencing an unknown arm throw std::invalid_argument.
void update(StatTable& table, std::span<const ObservationRecord> obs);

// The Lipschitz-sharing UCB grid, n_targets x num_levels. Entry (i, 0) is 0.
// Entry (i, j) is the minimum over arms (u, v) of
//   selfUCB(u, v) + L * (effort_slack(v -> j) + distance(i, u))
// plus, when the zero anchor is on, the bound L * psi_j from the known zero
// at effort 0. Monotonicity makes the effort slack one-sided; cross-target
// terms require use_cross_target. Never exceeds selfUCB(i, j).
std::vector<std::vector<double>> ucb_table(const StatTable& table, const ProblemInstance& inst,
                                           double t, const UcbParams& params);

}  // namespace lizard
