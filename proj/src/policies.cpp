#include "lizard/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lizard/mckp.hpp"

namespace lizard {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<long> schedule_phase_length(int n_targets, double lipschitz, int k) {
    const double arg =
        static_cast<double>(n_targets) / (lipschitz * lipschitz * std::exp2(3.0 * k));
    if (arg <= std::exp(1.0)) return std::nullopt;
    return static_cast<long>(std::ceil(arg * std::log(arg)));
}

AdaptiveSchedule adaptive_schedule(int n_targets, double lipschitz, long max_horizon) {
    if (!(lipschitz > 0.0)) throw std::invalid_argument("adaptive_schedule: L must be positive");
    AdaptiveSchedule schedule;
    long total = 0;
    for (int k = 0;; ++k) {
        const double gap = std::exp2(-k);
        const auto len = schedule_phase_length(n_targets, lipschitz, k);
        if (!len.has_value()) {
            schedule.phases.push_back({gap, std::max<long>(0, max_horizon - total)});
            break;
        }
        ++schedule.formula_phase_count;
        if (total + *len >= max_horizon) {
            schedule.phases.push_back({gap, max_horizon - total});
            break;
        }
        schedule.phases.push_back({gap, *len});
        total += *len;
    }
    return schedule;
}

double optimal_fixed_gap(int n_targets, double lipschitz, long horizon) {
    const double t = static_cast<double>(horizon);
    return std::cbrt(n_targets * std::log(t) / t) / std::cbrt(lipschitz * lipschitz);
}

double snap_gap_to_dyadic(double gap) {
    gap = std::clamp(gap, std::exp2(-20), 1.0);
    const double k = std::round(std::log2(1.0 / gap));
    return std::exp2(-std::max(0.0, k));
}

namespace {

MckpSolution solve_superarm(const Discretization& grid,
                            std::vector<std::vector<double>> values, double budget) {
    return solve_mckp(make_mckp(grid, std::move(values), budget));
}

class LizardPolicy final : public Policy {
public:
    LizardPolicy(std::string name, const ProblemInstance& inst, const HistoryLog& history,
                 const UcbParams& params, Discretization grid)
        : name_(std::move(name)), inst_(inst), params_(params),
          table_(make_stat_table(inst.num_targets(), std::move(grid))) {
        warm_start(table_, history);
    }

    EffortAssignment select(long t) override {
        ucb_ = ucb_table(table_, inst_, static_cast<double>(t), params_);
        const auto sol = solve_superarm(table_.grid, ucb_, inst_.budget);
        return assignment_from_levels(table_.grid, sol.levels);
    }

    void observe(long, const std::vector<ObservationRecord>& obs) override {
        update(table_, obs);
    }

    const std::string& name() const override { return name_; }
    const std::vector<std::vector<double>>* last_ucb_grid() const override { return &ucb_; }

    StatTable& table() { return table_; }

private:
    std::string name_;
    const ProblemInstance& inst_;
    UcbParams params_;
    StatTable table_;
    std::vector<std::vector<double>> ucb_;
};

class AdaptiveLizardPolicy final : public Policy {
public:
    AdaptiveLizardPolicy(std::string name, const ProblemInstance& inst,
                         const HistoryLog& history, const UcbParams& params, long horizon)
        : name_(std::move(name)), inst_(inst), params_(params),
          schedule_(adaptive_schedule(inst.num_targets(), params.lipschitz_constant, horizon)),
          table_(make_stat_table(inst.num_targets(),
                                 make_discretization(schedule_.phases.front().gap))) {
        warm_start(table_, history);
    }

    EffortAssignment select(long t) override {
        refine_if_needed(t);
        ucb_ = ucb_table(table_, inst_, static_cast<double>(t), params_);
        const auto sol = solve_superarm(table_.grid, ucb_, inst_.budget);
        return assignment_from_levels(table_.grid, sol.levels);
    }

    void observe(long, const std::vector<ObservationRecord>& obs) override {
        update(table_, obs);
    }

    const std::string& name() const override { return name_; }
    const std::vector<std::vector<double>>* last_ucb_grid() const override { return &ucb_; }

    const Discretization& current_grid() const { return table_.grid; }

private:
    void refine_if_needed(long t) {
        std::size_t phase = 0;
        long boundary = schedule_.phases[0].length;
        while (phase + 1 < schedule_.phases.size() && t > boundary) {
            ++phase;
            boundary += schedule_.phases[phase].length;
        }
        if (phase == phase_) return;
        phase_ = phase;
        // Dyadic grids nest, so stats at shared effort values carry over;
        // newly inserted levels start unpulled.
        auto next = make_stat_table(inst_.num_targets(),
                                    make_discretization(schedule_.phases[phase].gap));
        for (int i = 0; i < inst_.num_targets(); ++i) {
            for (int j = 1; j <= next.grid.num_tracked(); ++j) {
                const int old_level = table_.grid.find_level(next.grid.levels[j]);
                if (old_level > 0) next.at(i, j) = table_.at(i, old_level);
            }
        }
        table_ = std::move(next);
    }

    std::string name_;
    const ProblemInstance& inst_;
    UcbParams params_;
    AdaptiveSchedule schedule_;
    StatTable table_;
    std::size_t phase_ = 0;
    std::vector<std::vector<double>> ucb_;
};

// Per-arm selfUCBs only; the zero level stays at its known zero. No sharing
// of any kind across arms.
class CucbPolicy final : public Policy {
public:
    CucbPolicy(std::string name, const ProblemInstance& inst, const HistoryLog& history,
               const UcbParams& params)
        : name_(std::move(name)), inst_(inst), params_(params),
          table_(make_stat_table(inst.num_targets(), inst.discretization)) {
        warm_start(table_, history);
    }

    EffortAssignment select(long t) override {
        const int tracked = table_.grid.num_tracked();
        ucb_.assign(inst_.num_targets(), std::vector<double>(tracked + 1, 0.0));
        for (int i = 0; i < inst_.num_targets(); ++i) {
            for (int j = 1; j <= tracked; ++j) {
                ucb_[i][j] = self_ucb(table_.at(i, j), static_cast<double>(t), params_);
            }
        }
        const auto sol = solve_superarm(table_.grid, ucb_, inst_.budget);
        return assignment_from_levels(table_.grid, sol.levels);
    }

    void observe(long, const std::vector<ObservationRecord>& obs) override {
        update(table_, obs);
    }

    const std::string& name() const override { return name_; }
    const std::vector<std::vector<double>>* last_ucb_grid() const override { return &ucb_; }

private:
    std::string name_;
    const ProblemInstance& inst_;
    UcbParams params_;
    StatTable table_;
    std::vector<std::vector<double>> ucb_;
};

// Continuous-arm baseline over whole effort vectors; observes only the
// composite reward. Arms cover an L1 ball scaled by their confidence radius,
// and each round activates at most one uncovered sampled candidate.
class ZoomingPolicy final : public Policy {
public:
    ZoomingPolicy(std::string name, const ProblemInstance& inst, const UcbParams& params,
                  std::uint64_t seed)
        : name_(std::move(name)), inst_(inst), params_(params), rng_(seed) {}

    EffortAssignment select(long t) override {
        maybe_activate(t);
        const double tt = static_cast<double>(t);
        int best = -1;
        double best_index = -kInf;
        for (std::size_t a = 0; a < arms_.size(); ++a) {
            const double idx = arm_index(arms_[a], tt);
            if (idx > best_index) {
                best_index = idx;
                best = static_cast<int>(a);
            }
        }
        last_played_ = best;
        EffortAssignment out;
        out.efforts = arms_[best].center;
        return out;
    }

    void observe(long, const std::vector<ObservationRecord>& obs) override {
        double composite = 0.0;
        for (const auto& rec : obs) composite += rec.outcome;
        auto& arm = arms_[last_played_];
        ++arm.pulls;
        arm.total_reward += composite;
    }

    const std::string& name() const override { return name_; }

private:
    struct ActiveArm {
        std::vector<double> center;
        long pulls = 0;
        double total_reward = 0.0;
    };

    double radius(const ActiveArm& arm, double t) const {
        if (arm.pulls == 0) return kInf;
        const double n = static_cast<double>(arm.pulls);
        return params_.radius_mode == RadiusMode::theory
                   ? std::sqrt(3.0 * std::log(t) / (2.0 * n))
                   : std::sqrt(params_.epsilon / (2.0 * n));
    }

    double arm_index(const ActiveArm& arm, double t) const {
        const double r = radius(arm, t);
        if (std::isinf(r)) return kInf;
        return arm.total_reward / static_cast<double>(arm.pulls) + 2.0 * r;
    }

    std::vector<double> sample_feasible() {
        std::vector<double> beta(inst_.num_targets());
        double total = 0.0;
        for (double& b : beta) {
            b = rng_.uniform();
            total += b;
        }
        if (total > inst_.budget && total > 0.0) {
            const double scale = inst_.budget / total;
            for (double& b : beta) b *= scale;
        }
        return beta;
    }

    double l1_distance(const std::vector<double>& a, const std::vector<double>& b) const {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
        return d;
    }

    void maybe_activate(long t) {
        const double tt = static_cast<double>(t);
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = sample_feasible();
            bool covered = false;
            for (const auto& arm : arms_) {
                const double ball = radius(arm, tt) * params_.lipschitz_constant;
                if (l1_distance(candidate, arm.center) <= ball) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                arms_.push_back({std::move(candidate), 0, 0.0});
                return;
            }
        }
    }

    std::string name_;
    const ProblemInstance& inst_;
    UcbParams params_;
    Rng rng_;
    std::vector<ActiveArm> arms_;
    int last_played_ = -1;
};

// Static strategy: one MCKP solve over the historical empirical means
// (unobserved arms valued zero), played every round.
class ExploitPolicy final : public Policy {
public:
    ExploitPolicy(std::string name, const ProblemInstance& inst, const HistoryLog& history)
        : name_(std::move(name)) {
        const auto& grid = inst.discretization;
        const int n = inst.num_targets();
        std::vector<std::vector<long>> pulls(n, std::vector<long>(grid.num_levels(), 0));
        std::vector<std::vector<long>> wins(n, std::vector<long>(grid.num_levels(), 0));
        for (const auto& rec : history.records) {
            const int level = grid.find_level(rec.effort);
            if (level <= 0 || rec.target < 0 || rec.target >= n) continue;
            ++pulls[rec.target][level];
            wins[rec.target][level] += rec.outcome;
        }
        std::vector<std::vector<double>> means(n, std::vector<double>(grid.num_levels(), 0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = 1; j < grid.num_levels(); ++j) {
                if (pulls[i][j] > 0) {
                    means[i][j] =
                        static_cast<double>(wins[i][j]) / static_cast<double>(pulls[i][j]);
                }
            }
        }
        const auto sol = solve_superarm(grid, std::move(means), inst.budget);
        fixed_ = assignment_from_levels(grid, sol.levels);
    }

    EffortAssignment select(long) override { return fixed_; }
    void observe(long, const std::vector<ObservationRecord>&) override {}
    const std::string& name() const override { return name_; }

private:
    std::string name_;
    EffortAssignment fixed_;
};

// Plays the exact grid optimum every round; reference upper end of the
// normalized performance scale.
class OraclePolicy final : public Policy {
public:
    OraclePolicy(std::string name, const ProblemInstance& inst)
        : name_(std::move(name)), fixed_(compute_optimal(inst).assignment) {}

    EffortAssignment select(long) override { return fixed_; }
    void observe(long, const std::vector<ObservationRecord>&) override {}
    const std::string& name() const override { return name_; }

private:
    std::string name_;
    EffortAssignment fixed_;
};

}  // namespace

bool is_policy_name(const std::string& name) {
    return name == "lizard" || name == "lizard-adaptive" || name == "cucb" ||
           name == "zooming" || name == "exploit" || name == "oracle";
}

std::unique_ptr<Policy> make_policy(const std::string& name, const ProblemInstance& inst,
                                    const HistoryLog& history, const UcbParams& params,
                                    long horizon, std::uint64_t policy_seed) {
    if (name == "lizard") {
        return std::make_unique<LizardPolicy>(name, inst, history, params, inst.discretization);
    }
    if (name == "lizard-adaptive") {
        return std::make_unique<AdaptiveLizardPolicy>(name, inst, history, params, horizon);
    }
    if (name == "cucb") {
        return std::make_unique<CucbPolicy>(name, inst, history, params);
    }
    if (name == "zooming") {
        return std::make_unique<ZoomingPolicy>(name, inst, params, policy_seed);
    }
    if (name == "exploit") {
        return std::make_unique<ExploitPolicy>(name, inst, history);
    }
    if (name == "oracle") {
        return std::make_unique<OraclePolicy>(name, inst);
    }
    throw std::invalid_argument("unknown policy: " + name);
}

}  // namespace lizard
