#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lizard/environment.hpp"
#include "lizard/policies.hpp"
#include "lizard/stats.hpp"

namespace lizard {

// Raised for malformed configs, unknown keys, and unknown policy names;
// mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    int n_targets = 25;
    double budget = 1.0;
    long horizon = 500;
    int history_steps = 50;
    std::vector<std::string> policies = {"lizard", "cucb", "zooming", "exploit"};
    int trials = 30;
    std::uint64_t seed = 1;
    std::string radius_mode = "epsilon";
    double epsilon = 0.1;
    bool use_monotonicity = true;
    bool use_zero_anchor = true;
    bool use_cross_target = true;
    // Lipschitz constant handed to the policies; the synthetic environment's
    // true constant stays 1. "inf" disables all Lipschitz transfers.
    double lipschitz = 1.0;
    // Fixed dyadic gap as text (e.g. "0.25"), or "adaptive".
    std::string discretization = "0.0625";
    double bias_weight = 2.0;
    int min_segments = 4;
    int max_segments = 6;
    double slope_cap = 1.0;
    // When non-empty, the first trial of each policy writes its per-round UCB
    // grid to <ucb_dump><policy>.csv.
    std::string ucb_dump;
};

ExperimentConfig load_config(const std::string& path);
// Sets one key from its text form; the same names work in config files and
// as CLI --key value overrides.
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

UcbParams ucb_params_from(const ExperimentConfig& config);
// Instance gap implied by the config: the fixed gap, or the finest gap the
// adaptive schedule reaches within the horizon.
double instance_gap(const ExperimentConfig& config);

struct TrialResult {
    std::string policy;
    std::uint64_t seed = 0;
    std::vector<double> expected;  // expected reward of the played assignment per round
    std::vector<double> realized;  // summed Bernoulli outcomes per round
    std::vector<EffortAssignment> assignments;
    double optimal_value = 0.0;
    double exploit_value = 0.0;
};

// Generates instance and history from the trial seed, warm starts the
// policy, and runs the select/sample/update loop for config.horizon rounds.
TrialResult run_trial(const ExperimentConfig& config, const std::string& policy_name,
                      int trial_index);

struct MetricSeries {
    std::vector<double> mean_reward, stderr_reward;
    std::vector<double> mean_regret, stderr_regret;
    std::vector<double> mean_norm_perf, stderr_norm_perf;
};

struct PolicyResult {
    std::string policy;
    MetricSeries series;
    std::vector<TrialResult> trials;
};

// Runs trials for every configured policy (seeds seed+0..seed+trials-1),
// possibly on a worker pool sized by LIZARD_WORKERS, and aggregates
// mean +/- standard error per timestep. Results are sorted by policy name so
// scheduling never affects output.
std::vector<PolicyResult> run_experiment(const ExperimentConfig& config);

// 100 * (reward - exploit) / (optimal - exploit); NaN marks a degenerate
// denominator.
double normalized_performance(double reward, double exploit_reward, double optimal_reward);

// Prefix sums of (optimal - expected reward).
std::vector<double> cumulative_regret(const TrialResult& result, double optimal_value);

// Header t,policy,mean_reward,stderr_reward,mean_regret,stderr_regret,
// mean_norm_perf,stderr_norm_perf; one row per (t, policy); 12 significant
// digits; byte-identical across runs of the same config.
void emit_csv(const std::vector<PolicyResult>& results, const std::string& path);

}  // namespace lizard
