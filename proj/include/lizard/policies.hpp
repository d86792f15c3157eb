#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lizard/environment.hpp"
#include "lizard/stats.hpp"

namespace lizard {

// Phase plan for adaptively discretized runs: gap 2^-k for T_k rounds, where
// T_k = ceil(arg * ln(arg)) with arg = N / (L^2 * 8^k). Refinement stops once
// the argument drops to e or the horizon is exhausted; the final gap then
// runs for the remaining rounds.
struct AdaptiveSchedule {
    struct Phase {
        double gap = 1.0;
        long length = 0;
    };
    std::vector<Phase> phases;  // lengths sum to the horizon
    int formula_phase_count = 0;
};

// Raw T_k from the phase-length formula; empty once the log argument is at
// most e.
std::optional<long> schedule_phase_length(int n_targets, double lipschitz, int k);

AdaptiveSchedule adaptive_schedule(int n_targets, double lipschitz, long max_horizon);

// Discretization gap balancing selection and discretization regret for a
// finite horizon: (ln T / T)^(1/3) * N^(1/3) * L^(-2/3).
double optimal_fixed_gap(int n_targets, double lipschitz, long horizon);

// Nearest power of two 2^-k in (0, 1].
double snap_gap_to_dyadic(double gap);

// Common round interface: select an assignment, then feed back the sampled
// observations. One policy instance per trial; not shared across threads.
class Policy {
public:
    virtual ~Policy() = default;
    virtual EffortAssignment select(long t) = 0;
    virtual void observe(long t, const std::vector<ObservationRecord>& obs) = 0;
    virtual const std::string& name() const = 0;
    // UCB grid of the last select() call, for diagnostic dumps. Null for
    // policies that do not build one.
    virtual const std::vector<std::vector<double>>* last_ucb_grid() const { return nullptr; }
};

// Names: lizard, lizard-adaptive, cucb, zooming, exploit, oracle.
bool is_policy_name(const std::string& name);

// Throws std::invalid_argument for unknown names.
std::unique_ptr<Policy> make_policy(const std::string& name, const ProblemInstance& inst,
                                    const HistoryLog& history, const UcbParams& params,
                                    long horizon, std::uint64_t policy_seed);

}  // namespace lizard
