#include "lizard/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lizard/mckp.hpp"

namespace lizard {

double EffortAssignment::total_effort() const {
    return std::accumulate(efforts.begin(), efforts.end(), 0.0);
}

EffortAssignment assignment_from_levels(const Discretization& grid, std::vector<int> levels) {
    EffortAssignment a;
    a.efforts.reserve(levels.size());
    for (int j : levels) {
        if (j < 0 || j >= grid.num_levels()) {
            throw std::invalid_argument("assignment_from_levels: level index out of range");
        }
        a.efforts.push_back(grid.levels[j]);
    }
    a.levels = std::move(levels);
    return a;
}

bool is_feasible(const ProblemInstance& inst, const EffortAssignment& a) {
    if (static_cast<int>(a.efforts.size()) != inst.num_targets()) return false;
    for (double e : a.efforts) {
        if (e < -kEffortTol || e > 1.0 + kEffortTol) return false;
    }
    return a.total_effort() <= inst.budget + kEffortTol;
}

double expected_reward(const ProblemInstance& inst, const EffortAssignment& a) {
    if (!is_feasible(inst, a)) {
        throw std::invalid_argument("expected_reward: infeasible assignment");
    }
    double total = 0.0;
    for (int i = 0; i < inst.num_targets(); ++i) {
        total += evaluate_reward(inst.targets[i].reward, a.efforts[i]);
    }
    return total;
}

std::vector<ObservationRecord> sample_round(const ProblemInstance& inst,
                                            const EffortAssignment& a, Rng& rng, long timestep) {
    if (!is_feasible(inst, a)) {
        throw std::invalid_argument("sample_round: infeasible assignment");
    }
    std::vector<ObservationRecord> out;
    out.reserve(inst.num_targets());
    for (int i = 0; i < inst.num_targets(); ++i) {
        ObservationRecord rec;
        rec.target = i;
        rec.effort_level = a.levels.empty() ? -1 : a.levels[i];
        rec.effort = a.efforts[i];
        rec.timestep = timestep;
        const double p = evaluate_reward(inst.targets[i].reward, a.efforts[i]);
        rec.outcome = rng.bernoulli(p) ? 1 : 0;
        out.push_back(rec);
    }
    return out;
}

namespace {

// Monotone increments over the segment partition: a positive random split of
// `total`, iteratively clipped so no segment slope exceeds `max_slope`.
// Feasible whenever total <= max_slope * 1.
std::vector<double> slope_capped_increments(const std::vector<double>& widths, double total,
                                            double max_slope, Rng& rng) {
    const std::size_t s = widths.size();
    std::vector<double> raw(s);
    double raw_sum = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
        raw[k] = -std::log(1.0 - rng.uniform());  // exponential, Dirichlet-like split
        raw_sum += raw[k];
    }
    std::vector<double> inc(s);
    for (std::size_t k = 0; k < s; ++k) inc[k] = total * raw[k] / raw_sum;
    if (std::isinf(max_slope)) return inc;

    for (int pass = 0; pass < 64; ++pass) {
        double excess = 0.0;
        double headroom = 0.0;
        for (std::size_t k = 0; k < s; ++k) {
            const double cap = max_slope * widths[k];
            if (inc[k] > cap) {
                excess += inc[k] - cap;
                inc[k] = cap;
            } else {
                headroom += cap - inc[k];
            }
        }
        if (excess <= 1e-12 || headroom <= 0.0) break;
        for (std::size_t k = 0; k < s; ++k) {
            const double cap = max_slope * widths[k];
            const double room = cap - inc[k];
            if (room > 0.0) inc[k] += excess * room / headroom;
        }
    }
    return inc;
}

}  // namespace

ProblemInstance generate_synthetic_instance(const SyntheticSpec& spec) {
    if (spec.n_targets < 1) {
        throw std::invalid_argument("generate_synthetic_instance: need at least one target");
    }
    if (spec.min_segments < 1 || spec.max_segments < spec.min_segments) {
        throw std::invalid_argument("generate_synthetic_instance: bad segment range");
    }
    Rng rng(Rng::derive(spec.seed, 0x5e9));

    ProblemInstance inst;
    inst.budget = spec.budget;
    inst.lipschitz_constant = spec.lipschitz_constant;
    inst.discretization = make_uniform_discretization(spec.gap);
    inst.distance_mode = DistanceMode::reward_sup_distance;
    inst.targets.reserve(spec.n_targets);

    for (int i = 0; i < spec.n_targets; ++i) {
        Target t;
        t.features = {rng.uniform(), rng.uniform()};

        const int segments =
            spec.min_segments + rng.uniform_int(spec.max_segments - spec.min_segments + 1);
        std::vector<double> interior(segments - 1);
        for (double& e : interior) e = rng.uniform(0.05, 0.95);
        std::sort(interior.begin(), interior.end());

        std::vector<double> efforts;
        efforts.push_back(0.0);
        for (double e : interior) {
            // Keep knots separated so segments stay non-degenerate.
            if (e - efforts.back() > 0.02) efforts.push_back(e);
        }
        efforts.push_back(1.0);

        std::vector<double> widths(efforts.size() - 1);
        for (std::size_t k = 0; k + 1 < efforts.size(); ++k) {
            widths[k] = efforts[k + 1] - efforts[k];
        }
        const double saturation = rng.uniform(0.2, 1.0);
        const double total = std::min(saturation, spec.slope_cap);
        const auto inc = slope_capped_increments(widths, total, spec.slope_cap, rng);

        t.reward.knots.push_back({0.0, 0.0});
        double value = 0.0;
        for (std::size_t k = 0; k < widths.size(); ++k) {
            value = std::min(1.0, value + inc[k]);
            t.reward.knots.push_back({efforts[k + 1], value});
        }
        inst.targets.push_back(std::move(t));
    }
    compute_distance_matrix(inst);
    return inst;
}

HistoryLog generate_historical_data(const ProblemInstance& inst, int horizon, double bias_weight,
                                    Rng& rng) {
    if (horizon < 0) throw std::invalid_argument("generate_historical_data: negative horizon");
    HistoryLog log;
    const int n = inst.num_targets();
    const auto& grid = inst.discretization;
    const double unit = grid.min_gap();
    const int budget_units = static_cast<int>(std::floor(inst.budget / unit + 1e-9));
    std::vector<int> level_cost(grid.num_levels());
    for (int j = 0; j < grid.num_levels(); ++j) {
        level_cost[j] = static_cast<int>(std::lround(grid.levels[j] / unit));
    }

    std::vector<double> weight(n);
    for (int i = 0; i < n; ++i) {
        const double accessibility =
            inst.targets[i].features.empty() ? 0.5 : inst.targets[i].features[0];
        weight[i] = std::exp(bias_weight * accessibility);
    }

    for (int step = 0; step < horizon; ++step) {
        std::vector<int> levels(n, 0);
        std::vector<char> taken(n, 0);
        int remaining = budget_units;
        int candidates = n;
        while (remaining > 0 && candidates > 0) {
            double total_w = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!taken[i]) total_w += weight[i];
            }
            double u = rng.uniform() * total_w;
            int pick = -1;
            for (int i = 0; i < n; ++i) {
                if (taken[i]) continue;
                u -= weight[i];
                if (u <= 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                for (int i = n - 1; i >= 0; --i) {
                    if (!taken[i]) {
                        pick = i;
                        break;
                    }
                }
            }
            taken[pick] = 1;
            --candidates;
            // Patrols concentrate on the targets they visit: draw a
            // substantial effort share and snap it onto the grid.
            const double desired = rng.uniform(0.25, 1.0);
            int j = static_cast<int>(std::lround(desired / unit));
            j = std::min(j, remaining);
            j = std::max(j, 1);
            while (j > 0 && level_cost[j] > remaining) --j;
            if (j == 0) continue;
            levels[pick] = j;
            remaining -= level_cost[j];
        }
        const auto assignment = assignment_from_levels(grid, levels);
        auto records = sample_round(inst, assignment, rng, step - horizon);
        log.records.insert(log.records.end(), records.begin(), records.end());
    }
    return log;
}

OptimalResult compute_optimal(const ProblemInstance& inst, double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("compute_optimal: grid_step <= 0");
    const double steps = 1.0 / grid_step;
    if (std::abs(steps - std::round(steps)) > 1e-6) {
        throw std::invalid_argument("compute_optimal: grid_step does not divide 1");
    }
    const double budget_steps = inst.budget / grid_step;
    if (std::abs(budget_steps - std::round(budget_steps)) > 1e-6) {
        throw std::invalid_argument("compute_optimal: grid_step does not divide the budget");
    }

    const auto grid = make_uniform_discretization(grid_step);
    std::vector<std::vector<double>> values(inst.num_targets());
    for (int i = 0; i < inst.num_targets(); ++i) {
        values[i].reserve(grid.num_levels());
        for (double psi : grid.levels) {
            values[i].push_back(evaluate_reward(inst.targets[i].reward, psi));
        }
    }
    const auto sol = solve_mckp(make_mckp(grid, std::move(values), inst.budget));

    OptimalResult result;
    result.value = sol.objective;
    result.assignment = assignment_from_levels(grid, sol.levels);
    result.grid_step = grid_step;
    result.continuity_error_bound = inst.num_targets() * inst.lipschitz_constant * grid_step;
    return result;
}

OptimalResult compute_optimal(const ProblemInstance& inst) {
    return compute_optimal(inst, inst.discretization.min_gap() / 4.0);
}

}  // namespace lizard
