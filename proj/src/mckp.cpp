#include "lizard/mckp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lizard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Replaces +infinity by 1 + N + sum of finite positive values, so that any
// selection containing one more infinite arm beats every selection with
// fewer, regardless of the finite entries.
std::vector<std::vector<double>> substitute_sentinel(
    const std::vector<std::vector<double>>& values) {
    double finite_sum = 0.0;
    bool has_inf = false;
    for (const auto& row : values) {
        for (double v : row) {
            if (std::isinf(v)) {
                has_inf = true;
            } else {
                finite_sum += std::max(v, 0.0);
            }
        }
    }
    if (!has_inf) return values;
    const double sentinel = 1.0 + static_cast<double>(values.size()) + finite_sum;
    auto out = values;
    for (auto& row : out) {
        for (double& v : row) {
            if (std::isinf(v)) v = sentinel;
        }
    }
    return out;
}

void check_shape(const MckpInstance& m) {
    if (m.budget_units < 0) throw std::invalid_argument("mckp: negative budget");
    if (m.level_costs.empty() || m.level_costs[0] != 0) {
        throw std::invalid_argument("mckp: level 0 must cost 0");
    }
    for (std::size_t j = 1; j < m.level_costs.size(); ++j) {
        if (m.level_costs[j] < m.level_costs[j - 1]) {
            throw std::invalid_argument("mckp: level costs must be non-decreasing");
        }
    }
    for (const auto& row : m.values) {
        if (row.size() != m.level_costs.size()) {
            throw std::invalid_argument("mckp: value row does not match level count");
        }
        for (double v : row) {
            if (std::isnan(v)) throw std::invalid_argument("mckp: NaN value");
        }
    }
}

}  // namespace

MckpInstance make_mckp(const Discretization& grid, std::vector<std::vector<double>> values,
                       double budget) {
    MckpInstance m;
    const double unit = grid.min_gap();
    m.level_costs.reserve(grid.num_levels());
    for (double psi : grid.levels) {
        const double units = psi / unit;
        const long c = std::lround(units);
        if (std::abs(units - static_cast<double>(c)) > 1e-9) {
            throw std::invalid_argument("make_mckp: level cost grid not integral");
        }
        m.level_costs.push_back(static_cast<int>(c));
    }
    m.budget_units = static_cast<int>(std::floor(budget / unit + 1e-9));
    m.values = std::move(values);
    return m;
}

MckpSolution solve_mckp(const MckpInstance& m) {
    check_shape(m);
    const auto values = substitute_sentinel(m.values);
    const int n = static_cast<int>(values.size());
    const int num_levels = static_cast<int>(m.level_costs.size());
    const int units = m.budget_units;

    // dp[i][b]: best total for targets i..n-1 with b units left.
    std::vector<std::vector<double>> dp(n + 1, std::vector<double>(units + 1, 0.0));
    for (int i = n - 1; i >= 0; --i) {
        for (int b = 0; b <= units; ++b) {
            double best = -kInf;
            for (int j = 0; j < num_levels; ++j) {
                const int c = m.level_costs[j];
                if (c > b) break;  // costs non-decreasing
                best = std::max(best, values[i][j] + dp[i + 1][b - c]);
            }
            dp[i][b] = best;
        }
    }

    // Reconstruct forward, taking the lowest level index that attains the
    // optimum at each target. Smaller levels never cost more, so this yields
    // the lexicographically smallest optimal assignment.
    MckpSolution sol;
    sol.levels.assign(n, 0);
    int b = units;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < num_levels; ++j) {
            const int c = m.level_costs[j];
            if (c > b) break;
            if (values[i][j] + dp[i + 1][b - c] == dp[i][b]) {
                sol.levels[i] = j;
                b -= c;
                break;
            }
        }
    }
    sol.objective = dp[0][units];
    return sol;
}

MckpSolution brute_force_mckp(const MckpInstance& m) {
    check_shape(m);
    const auto values = substitute_sentinel(m.values);
    const int n = static_cast<int>(values.size());
    const int num_levels = static_cast<int>(m.level_costs.size());

    double combos = 1.0;
    for (int i = 0; i < n; ++i) combos *= num_levels;
    if (combos > 1e6) throw std::invalid_argument("brute_force_mckp: instance too large");

    MckpSolution best;
    best.objective = -kInf;
    std::vector<int> pick(n, 0);

    // Depth-first in lexicographic order; keeping only strict improvements
    // makes the first optimum found the lexicographically smallest.
    auto recurse = [&](auto&& self, int i, int budget_left, double total) -> void {
        if (i == n) {
            if (total > best.objective) {
                best.objective = total;
                best.levels = pick;
            }
            return;
        }
        for (int j = 0; j < num_levels; ++j) {
            if (m.level_costs[j] > budget_left) break;
            pick[i] = j;
            self(self, i + 1, budget_left - m.level_costs[j], total + values[i][j]);
        }
        pick[i] = 0;
    };
    recurse(recurse, 0, m.budget_units, 0.0);
    return best;
}

}  // namespace lizard
