#include "lizard/reward.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lizard {

double evaluate_reward(const PiecewiseLinearReward& f, double effort) {
    if (effort < -kEffortTol || effort > 1.0 + kEffortTol) {
        throw std::domain_error("evaluate_reward: effort outside [0, 1]");
    }
    effort = std::clamp(effort, 0.0, 1.0);
    const auto& k = f.knots;
    if (k.empty()) throw std::domain_error("evaluate_reward: empty reward function");
    if (effort <= k.front().effort + kEffortTol) return k.front().value;
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (effort <= k[i].effort + kEffortTol) {
            const double w = k[i].effort - k[i - 1].effort;
            if (w <= kEffortTol) return k[i].value;
            const double frac = (effort - k[i - 1].effort) / w;
            return k[i - 1].value + frac * (k[i].value - k[i - 1].value);
        }
    }
    return k.back().value;
}

double Discretization::min_gap() const {
    double gap = 1.0;
    for (std::size_t j = 1; j < levels.size(); ++j) {
        gap = std::min(gap, levels[j] - levels[j - 1]);
    }
    return gap;
}

int Discretization::find_level(double effort) const {
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (std::abs(levels[j] - effort) <= kEffortTol) return static_cast<int>(j);
    }
    return -1;
}

Discretization make_uniform_discretization(double gap) {
    if (!(gap > 0.0) || gap > 1.0) {
        throw std::invalid_argument("make_uniform_discretization: gap must be in (0, 1]");
    }
    const double steps = 1.0 / gap;
    const long m = std::lround(steps);
    if (m < 1 || std::abs(steps - static_cast<double>(m)) > 1e-9) {
        throw std::invalid_argument("make_uniform_discretization: 1/gap is not integral");
    }
    Discretization d;
    d.levels.reserve(m + 1);
    for (long j = 0; j <= m; ++j) {
        d.levels.push_back(static_cast<double>(j) / static_cast<double>(m));
    }
    return d;
}

Discretization make_discretization(double gap) {
    if (!(gap > 0.0) || gap > 1.0) {
        throw std::invalid_argument("make_discretization: gap must be in (0, 1]");
    }
    const double k = std::log2(1.0 / gap);
    if (std::abs(k - std::round(k)) > 1e-9) {
        throw std::invalid_argument("make_discretization: gap must be a dyadic fraction 2^-k");
    }
    return make_uniform_discretization(gap);
}

double feature_distance(const FeatureVector& a, const FeatureVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("feature_distance: vectors of different length");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
    }
    return std::sqrt(sq);
}

double reward_sup_distance(const PiecewiseLinearReward& f, const PiecewiseLinearReward& g,
                           double grid_step) {
    if (!(grid_step > 0.0)) {
        throw std::invalid_argument("reward_sup_distance: grid_step must be positive");
    }
    std::set<double> points;
    for (double x = 0.0; x < 1.0; x += grid_step) points.insert(x);
    points.insert(1.0);
    for (const auto& k : f.knots) points.insert(std::clamp(k.effort, 0.0, 1.0));
    for (const auto& k : g.knots) points.insert(std::clamp(k.effort, 0.0, 1.0));
    double sup = 0.0;
    for (double x : points) {
        sup = std::max(sup, std::abs(evaluate_reward(f, x) - evaluate_reward(g, x)));
    }
    return sup;
}

namespace {

// Min-max normalizes each feature dimension to [0, 1] across targets.
// Constant dimensions collapse to zero.
std::vector<FeatureVector> normalized_features(const ProblemInstance& inst) {
    const int n = inst.num_targets();
    std::vector<FeatureVector> out(n);
    if (n == 0) return out;
    const std::size_t dims = inst.targets[0].features.size();
    for (int i = 0; i < n; ++i) out[i].assign(dims, 0.0);
    for (std::size_t k = 0; k < dims; ++k) {
        double lo = inst.targets[0].features[k];
        double hi = lo;
        for (int i = 1; i < n; ++i) {
            lo = std::min(lo, inst.targets[i].features[k]);
            hi = std::max(hi, inst.targets[i].features[k]);
        }
        const double span = hi - lo;
        if (span <= 0.0) continue;
        for (int i = 0; i < n; ++i) {
            out[i][k] = (inst.targets[i].features[k] - lo) / span;
        }
    }
    return out;
}

}  // namespace

void compute_distance_matrix(ProblemInstance& inst) {
    const int n = inst.num_targets();
    inst.distance.assign(n, std::vector<double>(n, 0.0));
    if (inst.distance_mode == DistanceMode::euclidean_features) {
        const auto feats = normalized_features(inst);
        for (int i = 0; i < n; ++i) {
            for (int u = i + 1; u < n; ++u) {
                const double d = feature_distance(feats[i], feats[u]);
                inst.distance[i][u] = d;
                inst.distance[u][i] = d;
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int u = i + 1; u < n; ++u) {
                const double d =
                    reward_sup_distance(inst.targets[i].reward, inst.targets[u].reward);
                inst.distance[i][u] = d;
                inst.distance[u][i] = d;
            }
        }
    }
}

namespace {

void check_reward(const PiecewiseLinearReward& f, int target, ValidationReport& report) {
    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << "target " << target << ": " << what;
        report.violations.push_back(os.str());
    };
    const auto& k = f.knots;
    if (k.empty()) {
        fail("reward function has no knots");
        return;
    }
    if (std::abs(k.front().effort) > kEffortTol || std::abs(k.front().value) > kEffortTol) {
        fail("mu(0) != 0");
    }
    if (std::abs(k.back().effort - 1.0) > kEffortTol) {
        fail("last knot effort != 1");
    }
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (k[i].effort <= k[i - 1].effort + kEffortTol) {
            fail("knot efforts not strictly increasing");
            break;
        }
    }
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (k[i].value < k[i - 1].value - kEffortTol) {
            fail("monotonicity: knot values decrease");
            break;
        }
    }
    for (const auto& knot : k) {
        if (knot.value < -kEffortTol || knot.value > 1.0 + kEffortTol) {
            fail("knot value outside [0, 1]");
            break;
        }
        if (knot.effort < -kEffortTol || knot.effort > 1.0 + kEffortTol) {
            fail("knot effort outside [0, 1]");
            break;
        }
    }
}

}  // namespace

ValidationReport validate_instance(const ProblemInstance& inst) {
    ValidationReport report;
    const int n = inst.num_targets();
    if (n < 1) report.violations.push_back("instance has no targets");
    if (inst.budget < 0.0) report.violations.push_back("budget is negative");
    if (inst.budget > n + kEffortTol) {
        report.violations.push_back("budget exceeds number of targets");
    }
    if (!(inst.lipschitz_constant > 0.0)) {
        report.violations.push_back("lipschitz constant must be positive");
    }

    const auto& levels = inst.discretization.levels;
    if (levels.size() < 2 || std::abs(levels.front()) > kEffortTol ||
        std::abs(levels.back() - 1.0) > kEffortTol) {
        report.violations.push_back("discretization must span [0, 1]");
    }
    for (std::size_t j = 1; j < levels.size(); ++j) {
        if (levels[j] <= levels[j - 1] + kEffortTol) {
            report.violations.push_back("discretization levels not strictly increasing");
            break;
        }
    }

    std::size_t feature_dims = n > 0 ? inst.targets[0].features.size() : 0;
    for (int i = 0; i < n; ++i) {
        if (inst.targets[i].features.size() != feature_dims) {
            report.violations.push_back("feature vectors differ in length");
            break;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (double v : inst.targets[i].features) {
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "target " << i << ": non-finite feature value";
                report.violations.push_back(os.str());
                break;
            }
        }
    }
    for (int i = 0; i < n; ++i) check_reward(inst.targets[i].reward, i, report);

    if (!inst.distance.empty()) {
        bool bad = inst.distance.size() != static_cast<std::size_t>(n);
        for (int i = 0; !bad && i < n; ++i) {
            if (inst.distance[i].size() != static_cast<std::size_t>(n)) bad = true;
        }
        if (bad) {
            report.violations.push_back("distance matrix has wrong shape");
        } else {
            for (int i = 0; i < n; ++i) {
                if (std::abs(inst.distance[i][i]) > kEffortTol) {
                    report.violations.push_back("distance matrix diagonal not zero");
                    break;
                }
            }
            for (int i = 0; i < n; ++i) {
                bool asym = false;
                for (int u = 0; u < n; ++u) {
                    if (std::abs(inst.distance[i][u] - inst.distance[u][i]) > kEffortTol) {
                        report.violations.push_back("distance matrix not symmetric");
                        asym = true;
                        break;
                    }
                }
                if (asym) break;
            }
        }
    }
    return report;
}

}  // namespace lizard
