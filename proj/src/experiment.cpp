#include "lizard/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace lizard {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "off" || value == "0" || value == "no") return false;
    throw ConfigError("not a boolean: " + value);
}

double parse_double(const std::string& value) {
    if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw ConfigError("trailing characters in number: " + value);
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: " + value);
    }
}

long parse_long(const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw ConfigError("trailing characters in integer: " + value);
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not an integer: " + value);
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value) {
    if (key == "n_targets") config.n_targets = static_cast<int>(parse_long(value));
    else if (key == "budget") config.budget = parse_double(value);
    else if (key == "horizon") config.horizon = parse_long(value);
    else if (key == "history_steps") config.history_steps = static_cast<int>(parse_long(value));
    else if (key == "policies") config.policies = split_list(value);
    else if (key == "trials") config.trials = static_cast<int>(parse_long(value));
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_long(value));
    else if (key == "radius_mode") config.radius_mode = value;
    else if (key == "epsilon") config.epsilon = parse_double(value);
    else if (key == "use_monotonicity") config.use_monotonicity = parse_bool(value);
    else if (key == "use_zero_anchor") config.use_zero_anchor = parse_bool(value);
    else if (key == "use_cross_target") config.use_cross_target = parse_bool(value);
    else if (key == "lipschitz") config.lipschitz = parse_double(value);
    else if (key == "discretization") config.discretization = value;
    else if (key == "bias_weight") config.bias_weight = parse_double(value);
    else if (key == "min_segments") config.min_segments = static_cast<int>(parse_long(value));
    else if (key == "slope_cap") config.slope_cap = parse_double(value);
    else if (key == "max_segments") config.max_segments = static_cast<int>(parse_long(value));
    else if (key == "ucb_dump") config.ucb_dump = value;
    else throw ConfigError("unknown config key: " + key);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto sep = line.find('=');
        if (sep == std::string::npos) sep = line.find(' ');
        if (sep == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        apply_override(config, trim(line.substr(0, sep)), trim(line.substr(sep + 1)));
    }
    return config;
}

UcbParams ucb_params_from(const ExperimentConfig& config) {
    UcbParams params;
    if (config.radius_mode == "theory") params.radius_mode = RadiusMode::theory;
    else if (config.radius_mode == "epsilon") params.radius_mode = RadiusMode::epsilon;
    else throw ConfigError("unknown radius_mode: " + config.radius_mode);
    params.epsilon = config.epsilon;
    params.lipschitz_constant = config.lipschitz;
    params.use_monotonicity = config.use_monotonicity;
    params.use_zero_anchor = config.use_zero_anchor;
    params.use_cross_target = config.use_cross_target;
    return params;
}

double instance_gap(const ExperimentConfig& config) {
    if (config.discretization == "adaptive") {
        const double l = std::isfinite(config.lipschitz) ? config.lipschitz : 1.0;
        return adaptive_schedule(config.n_targets, l, config.horizon).phases.back().gap;
    }
    return parse_double(config.discretization);
}

double normalized_performance(double reward, double exploit_reward, double optimal_reward) {
    const double span = optimal_reward - exploit_reward;
    if (!(span > 1e-12)) return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (reward - exploit_reward) / span;
}

std::vector<double> cumulative_regret(const TrialResult& result, double optimal_value) {
    std::vector<double> out;
    out.reserve(result.expected.size());
    double total = 0.0;
    for (double reward : result.expected) {
        total += optimal_value - reward;
        out.push_back(total);
    }
    return out;
}

TrialResult run_trial(const ExperimentConfig& config, const std::string& policy_name,
                      int trial_index) {
    if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
    if (config.trials < 1) throw ConfigError("trials must be at least 1");

    const std::uint64_t master = config.seed + static_cast<std::uint64_t>(trial_index);

    SyntheticSpec spec;
    spec.n_targets = config.n_targets;
    spec.seed = master;
    spec.budget = config.budget;
    spec.gap = instance_gap(config);
    spec.min_segments = config.min_segments;
    spec.max_segments = config.max_segments;
    spec.slope_cap = config.slope_cap;
    const auto inst = generate_synthetic_instance(spec);

    Rng history_rng(Rng::derive(master, 1));
    const auto history =
        generate_historical_data(inst, config.history_steps, config.bias_weight, history_rng);

    const auto params = ucb_params_from(config);

    TrialResult result;
    result.policy = policy_name;
    result.seed = master;
    result.optimal_value = compute_optimal(inst).value;
    {
        auto exploit = make_policy("exploit", inst, history, params, config.horizon, 0);
        result.exploit_value = expected_reward(inst, exploit->select(1));
    }

    std::unique_ptr<Policy> policy;
    try {
        policy = make_policy(policy_name, inst, history, params, config.horizon,
                             Rng::derive(master, 3));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    std::ofstream ucb_out;
    const bool dump_ucb = !config.ucb_dump.empty() && trial_index == 0;
    if (dump_ucb) {
        ucb_out.open(config.ucb_dump + policy_name + ".csv");
        ucb_out << "t,target,level,ucb\n";
    }

    Rng obs_rng(Rng::derive(master, 2));
    result.expected.reserve(config.horizon);
    result.realized.reserve(config.horizon);
    for (long t = 1; t <= config.horizon; ++t) {
        auto assignment = policy->select(t);
        result.expected.push_back(expected_reward(inst, assignment));
        auto records = sample_round(inst, assignment, obs_rng, t);
        double realized = 0.0;
        for (const auto& rec : records) realized += rec.outcome;
        result.realized.push_back(realized);
        policy->observe(t, records);
        if (dump_ucb) {
            if (const auto* grid = policy->last_ucb_grid()) {
                for (std::size_t i = 0; i < grid->size(); ++i) {
                    for (std::size_t j = 0; j < (*grid)[i].size(); ++j) {
                        ucb_out << t << ',' << i << ',' << j << ','
                                << format_value((*grid)[i][j]) << '\n';
                    }
                }
            }
        }
        result.assignments.push_back(std::move(assignment));
    }
    return result;
}

namespace {

// Mean and standard error (sample stddev / sqrt(n); 0 for a single trial).
void aggregate(const std::vector<std::vector<double>>& per_trial, std::vector<double>& mean,
               std::vector<double>& stderr_out) {
    const std::size_t trials = per_trial.size();
    const std::size_t len = per_trial.empty() ? 0 : per_trial[0].size();
    mean.assign(len, 0.0);
    stderr_out.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (const auto& series : per_trial) sum += series[t];
        const double m = sum / static_cast<double>(trials);
        mean[t] = m;
        if (trials > 1) {
            double sq = 0.0;
            for (const auto& series : per_trial) {
                const double d = series[t] - m;
                sq += d * d;
            }
            stderr_out[t] = std::sqrt(sq / static_cast<double>(trials - 1)) /
                            std::sqrt(static_cast<double>(trials));
        }
    }
}

int worker_count() {
    if (const char* env = std::getenv("LIZARD_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<PolicyResult> run_experiment(const ExperimentConfig& config) {
    auto policy_names = config.policies;
    std::sort(policy_names.begin(), policy_names.end());
    policy_names.erase(std::unique(policy_names.begin(), policy_names.end()),
                       policy_names.end());
    if (policy_names.empty()) throw ConfigError("no policies configured");
    for (const auto& name : policy_names) {
        if (!is_policy_name(name)) throw ConfigError("unknown policy: " + name);
    }

    struct Job {
        std::size_t policy;
        int trial;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < policy_names.size(); ++p) {
        for (int trial = 0; trial < config.trials; ++trial) jobs.push_back({p, trial});
    }

    std::vector<std::vector<TrialResult>> trials(policy_names.size());
    for (auto& v : trials) v.resize(config.trials);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto work = [&]() {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size() || failed.load()) break;
            const Job job = jobs[k];
            try {
                trials[job.policy][job.trial] =
                    run_trial(config, policy_names[job.policy], job.trial);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failure = e.what();
                failed.store(true);
            }
        }
    };

    const int workers = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& thread : pool) thread.join();
    }
    if (failed.load()) throw std::runtime_error("trial failed: " + failure);

    std::vector<PolicyResult> results;
    results.reserve(policy_names.size());
    for (std::size_t p = 0; p < policy_names.size(); ++p) {
        PolicyResult pr;
        pr.policy = policy_names[p];
        pr.trials = std::move(trials[p]);

        std::vector<std::vector<double>> reward, regret, norm;
        for (const auto& trial : pr.trials) {
            reward.push_back(trial.expected);
            regret.push_back(cumulative_regret(trial, trial.optimal_value));
            std::vector<double> perf;
            perf.reserve(trial.expected.size());
            for (double r : trial.expected) {
                perf.push_back(
                    normalized_performance(r, trial.exploit_value, trial.optimal_value));
            }
            norm.push_back(std::move(perf));
        }
        aggregate(reward, pr.series.mean_reward, pr.series.stderr_reward);
        aggregate(regret, pr.series.mean_regret, pr.series.stderr_regret);
        aggregate(norm, pr.series.mean_norm_perf, pr.series.stderr_norm_perf);
        results.push_back(std::move(pr));
    }
    return results;
}

void emit_csv(const std::vector<PolicyResult>& results, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << "t,policy,mean_reward,stderr_reward,mean_regret,stderr_regret,"
           "mean_norm_perf,stderr_norm_perf\n";
    auto sorted = results;
    std::sort(sorted.begin(), sorted.end(),
              [](const PolicyResult& a, const PolicyResult& b) { return a.policy < b.policy; });
    for (const auto& pr : sorted) {
        const auto& s = pr.series;
        for (std::size_t t = 0; t < s.mean_reward.size(); ++t) {
            out << (t + 1) << ',' << pr.policy << ',' << format_value(s.mean_reward[t]) << ','
                << format_value(s.stderr_reward[t]) << ',' << format_value(s.mean_regret[t])
                << ',' << format_value(s.stderr_regret[t]) << ','
                << format_value(s.mean_norm_perf[t]) << ','
                << format_value(s.stderr_norm_perf[t]) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lizard
