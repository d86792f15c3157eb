#include "lizard/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lizard {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ArmStats& StatTable::at(int target, int level) {
    return stats[static_cast<std::size_t>(target) * grid.num_tracked() + (level - 1)];
}

const ArmStats& StatTable::at(int target, int level) const {
    return stats[static_cast<std::size_t>(target) * grid.num_tracked() + (level - 1)];
}

StatTable make_stat_table(int n_targets, Discretization grid) {
    StatTable t;
    t.n_targets = n_targets;
    t.grid = std::move(grid);
    t.stats.assign(static_cast<std::size_t>(n_targets) * t.grid.num_tracked(), ArmStats{});
    return t;
}

double confidence_radius(const ArmStats& stats, double t, const UcbParams& params) {
    long n = stats.online_pulls;
    if (stats.warm_started) n += params.naive_history_counting ? stats.warm_pulls : 1;
    if (n <= 0) return kInf;
    switch (params.radius_mode) {
        case RadiusMode::theory:
            return std::sqrt(3.0 * std::log(t) / (2.0 * static_cast<double>(n)));
        case RadiusMode::epsilon:
            return std::sqrt(params.epsilon / (2.0 * static_cast<double>(n)));
    }
    return kInf;
}

namespace {

// Mean with the warm pseudo-pull folded in. Undefined (and unused) when the
// countable pull count is zero.
double arm_mean(const ArmStats& stats, const UcbParams& params) {
    double pulls = static_cast<double>(stats.online_pulls);
    double reward = stats.cumulative_reward;
    if (stats.warm_started) {
        const double w = params.naive_history_counting
                             ? static_cast<double>(stats.warm_pulls)
                             : 1.0;
        pulls += w;
        reward += w * stats.warm_mean;
    }
    if (pulls <= 0.0) return 0.0;
    return reward / pulls;
}

}  // namespace

double self_ucb(const ArmStats& stats, double t, const UcbParams& params) {
    const double radius = confidence_radius(stats, t, params);
    if (std::isinf(radius)) return kInf;
    return arm_mean(stats, params) + radius;
}

void warm_start(StatTable& table, const HistoryLog& history) {
    const int tracked = table.grid.num_tracked();
    std::vector<long> pulls(table.stats.size(), 0);
    std::vector<long> successes(table.stats.size(), 0);
    for (const auto& rec : history.records) {
        if (rec.target < 0 || rec.target >= table.n_targets) {
            throw std::invalid_argument("warm_start: record references unknown target");
        }
        const int level = table.grid.find_level(rec.effort);
        if (level <= 0) continue;  // off-grid or zero effort carries no arm information
        const std::size_t idx =
            static_cast<std::size_t>(rec.target) * tracked + (level - 1);
        ++pulls[idx];
        successes[idx] += rec.outcome;
    }
    for (std::size_t idx = 0; idx < table.stats.size(); ++idx) {
        if (pulls[idx] == 0) continue;
        auto& arm = table.stats[idx];
        arm.warm_started = true;
        arm.warm_pulls = pulls[idx];
        arm.warm_mean = static_cast<double>(successes[idx]) / static_cast<double>(pulls[idx]);
    }
}

void update(StatTable& table, std::span<const ObservationRecord> obs) {
    for (const auto& rec : obs) {
        if (rec.effort_level == 0) continue;
        if (rec.target < 0 || rec.target >= table.n_targets || rec.effort_level < 0 ||
            rec.effort_level >= table.grid.num_levels() ||
            std::abs(table.grid.levels[rec.effort_level] - rec.effort) > kEffortTol) {
            throw std::invalid_argument("update: record references unknown arm");
        }
        auto& arm = table.at(rec.target, rec.effort_level);
        arm.cumulative_reward += rec.outcome;
        ++arm.online_pulls;
    }
}

std::vector<std::vector<double>> ucb_table(const StatTable& table, const ProblemInstance& inst,
                                           double t, const UcbParams& params) {
    const int n = table.n_targets;
    const int tracked = table.grid.num_tracked();
    const double big_l = params.lipschitz_constant;

    std::vector<std::vector<double>> self(n, std::vector<double>(tracked + 1, 0.0));
    for (int u = 0; u < n; ++u) {
        for (int v = 1; v <= tracked; ++v) {
            self[u][v] = self_ucb(table.at(u, v), t, params);
        }
    }

    auto effort_slack = [&](double from_psi, double to_psi) {
        const double forward = to_psi - from_psi;
        if (!params.use_monotonicity) return std::abs(forward);
        return params.monotone_slack == MonotoneSlack::bound_lower
                   ? std::max(0.0, forward)
                   : std::max(0.0, -forward);
    };
    // Adds L * dist only when dist > 0 so a zero-distance candidate passes
    // its selfUCB through unchanged even when L is infinite.
    auto bound_from = [&](double base, double dist) {
        return dist > 0.0 ? base + big_l * dist : base;
    };

    // effort_bound[u][j]: tightest bound target u's own arms (and anchor)
    // place on effort level j.
    std::vector<std::vector<double>> effort_bound(n, std::vector<double>(tracked + 1, kInf));
    for (int u = 0; u < n; ++u) {
        for (int j = 1; j <= tracked; ++j) {
            const double psi_j = table.grid.levels[j];
            double best = kInf;
            for (int v = 1; v <= tracked; ++v) {
                const double slack = effort_slack(table.grid.levels[v], psi_j);
                best = std::min(best, bound_from(self[u][v], slack));
            }
            if (params.use_zero_anchor) {
                // The zero-effort arm has known value 0 and radius 0.
                best = std::min(best, bound_from(0.0, effort_slack(0.0, psi_j)));
            }
            effort_bound[u][j] = best;
        }
    }

    std::vector<std::vector<double>> ucb(n, std::vector<double>(tracked + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        ucb[i][0] = 0.0;
        for (int j = 1; j <= tracked; ++j) {
            double best = effort_bound[i][j];
            if (params.use_cross_target) {
                for (int u = 0; u < n; ++u) {
                    if (u == i) continue;
                    best = std::min(best, bound_from(effort_bound[u][j], inst.distance[i][u]));
                }
            }
            ucb[i][j] = best;
        }
    }
    return ucb;
}

}  // namespace lizard
