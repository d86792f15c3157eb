#pragma once

#include <string>
#include <vector>

namespace lizard {

// Absolute tolerance used when matching effort values against grid levels or
// knot positions.
inline constexpr double kEffortTol = 1e-9;

using FeatureVector = std::vector<double>;

struct RewardKnot {
    double effort = 0.0;
    double value = 0.0;
};

// Expected-detection function mu(beta) of one target over effort in [0, 1].
// Valid functions have a first knot (0, 0), strictly increasing efforts up to
// a final knot at effort 1, and non-decreasing values inside [0, 1].
struct PiecewiseLinearReward {
    std::vector<RewardKnot> knots;
};

// Linear interpolation between the bracketing knots; exact at knots.
// Throws std::domain_error when effort is outside [0, 1].
double evaluate_reward(const PiecewiseLinearReward& f, double effort);

// Effort levels {psi_0 = 0, ..., psi_J = 1}, strictly increasing.
struct Discretization {
    std::vector<double> levels;

    int num_levels() const { return static_cast<int>(levels.size()); }
    // Levels with nonzero effort; the zero level is the known anchor.
    int num_tracked() const { return static_cast<int>(levels.size()) - 1; }
    double min_gap() const;
    // Index of the level matching `effort` within kEffortTol, or -1.
    int find_level(double effort) const;
};

// Uniform grid {0, gap, 2*gap, ..., 1}. Requires gap = 2^-k for integer
// k >= 0; throws std::invalid_argument otherwise.
Discretization make_discretization(double gap);

// Uniform grid for any gap with 1/gap integral (used by instance files and
// test grids that are not dyadic). Throws std::invalid_argument otherwise.
Discretization make_uniform_discretization(double gap);

enum class DistanceMode {
    euclidean_features,   // min-max normalized Euclidean distance in feature space
    reward_sup_distance,  // max pointwise gap between reward functions
};

struct Target {
    FeatureVector features;
    PiecewiseLinearReward reward;
};

struct ProblemInstance {
    std::vector<Target> targets;
    double budget = 0.0;
    double lipschitz_constant = 1.0;
    Discretization discretization;
    DistanceMode distance_mode = DistanceMode::euclidean_features;
    // Pairwise target distances per distance_mode; symmetric, zero diagonal.
    // Filled by compute_distance_matrix.
    std::vector<std::vector<double>> distance;

    int num_targets() const { return static_cast<int>(targets.size()); }
};

// Euclidean norm of a - b. Throws std::invalid_argument on length mismatch.
double feature_distance(const FeatureVector& a, const FeatureVector& b);

// max over {0, grid_step, ..., 1} plus all knots of both functions of
// |f(beta) - g(beta)|. Exact for piecewise-linear functions since the sup is
// attained at a knot of f, a knot of g, or a crossing bracketed by the grid.
double reward_sup_distance(const PiecewiseLinearReward& f, const PiecewiseLinearReward& g,
                           double grid_step = 0.01);

// Populates inst.distance from the instance's distance_mode. Features are
// min-max normalized to [0, 1] per dimension first so one Lipschitz constant
// is meaningful across dimensions.
void compute_distance_matrix(ProblemInstance& inst);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks every instance and per-target invariant; collects all violations
// instead of stopping at the first.
ValidationReport validate_instance(const ProblemInstance& inst);

}  // namespace lizard
