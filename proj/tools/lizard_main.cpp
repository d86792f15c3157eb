#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lizard/environment.hpp"
#include "lizard/experiment.hpp"
#include "lizard/instance_io.hpp"
#include "lizard/policies.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct KeyValue {
    std::string key;
    std::string value;
};

// Every config key doubles as a --key value flag.
constexpr std::array<const char*, 18> kConfigKeys = {
    "n_targets",      "budget",          "horizon",        "history_steps",
    "policies",       "trials",          "seed",           "radius_mode",
    "epsilon",        "use_monotonicity", "use_zero_anchor", "use_cross_target",
    "lipschitz",      "discretization",  "bias_weight",    "min_segments",
    "max_segments",   "slope_cap",
};

void add_config_flags(CLI::App* cmd, std::vector<KeyValue>& sink) {
    for (const char* key : kConfigKeys) {
        cmd->add_option_function<std::string>(
            std::string("--") + key,
            [&sink, key](const std::string& value) { sink.push_back({key, value}); },
            std::string("Override config key ") + key);
    }
}

lizard::ExperimentConfig build_config(const std::string& config_path,
                                      const std::vector<KeyValue>& overrides,
                                      const std::string& ucb_dump) {
    lizard::ExperimentConfig config;
    if (!config_path.empty()) config = lizard::load_config(config_path);
    for (const auto& kv : overrides) lizard::apply_override(config, kv.key, kv.value);
    if (!ucb_dump.empty()) config.ucb_dump = ucb_dump;
    return config;
}

int cmd_run(const lizard::ExperimentConfig& config, const std::string& out_path) {
    const auto results = lizard::run_experiment(config);
    lizard::emit_csv(results, out_path);
    std::cout << "wrote " << out_path << " (" << results.size() << " policies, "
              << config.trials << " trials, T=" << config.horizon << ")\n";
    return kExitOk;
}

int cmd_optimal(const std::string& instance_path, double grid_step) {
    const auto inst = lizard::load_instance(instance_path);
    const auto result = grid_step > 0.0 ? lizard::compute_optimal(inst, grid_step)
                                        : lizard::compute_optimal(inst);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", result.value);
    std::cout << "value " << buf << "\n";
    std::cout << "grid_step " << result.grid_step << "\n";
    std::cout << "continuity_error_bound " << result.continuity_error_bound << "\n";
    std::cout << "assignment";
    for (double e : result.assignment.efforts) {
        std::snprintf(buf, sizeof(buf), "%.12g", e);
        std::cout << ' ' << buf;
    }
    std::cout << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& instance_path) {
    const auto inst = lizard::load_instance(instance_path);
    const auto report = lizard::validate_instance(inst);
    if (report.ok()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& violation : report.violations) {
        std::cout << "violation: " << violation << "\n";
    }
    return kExitRuntime;
}

int cmd_ablate(const lizard::ExperimentConfig& base, const std::string& key,
               const std::string& values_csv, const std::string& out_dir) {
    std::vector<std::string> values;
    std::size_t pos = 0;
    while (pos <= values_csv.size()) {
        const auto comma = values_csv.find(',', pos);
        const auto end = comma == std::string::npos ? values_csv.size() : comma;
        if (end > pos) values.push_back(values_csv.substr(pos, end - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw lizard::ConfigError("ablate: no values given");

    std::filesystem::create_directories(out_dir);
    for (const auto& value : values) {
        auto config = base;
        lizard::apply_override(config, key, value);
        const auto results = lizard::run_experiment(config);
        std::string safe = value;
        for (char& c : safe) {
            if (c == '/' || c == ' ') c = '_';
        }
        const auto path = out_dir + "/ablate_" + key + "_" + safe + ".csv";
        lizard::emit_csv(results, path);
        std::cout << key << "=" << value << " -> " << path;
        const auto& perf = results.front().series.mean_norm_perf;
        if (!perf.empty()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6g", perf.back());
            std::cout << " (final norm perf, " << results.front().policy << ": " << buf << ")";
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_generate(int n_targets, std::uint64_t seed, double budget, double gap,
                 const std::string& out_path) {
    lizard::SyntheticSpec spec;
    spec.n_targets = n_targets;
    spec.seed = seed;
    spec.budget = budget;
    spec.gap = gap;
    const auto inst = lizard::generate_synthetic_instance(spec);
    lizard::save_instance(inst, out_path);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budgeted patrol-effort bandit experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<KeyValue> overrides;
    std::string out_path = "metrics.csv";
    std::string ucb_dump;

    auto* run = app.add_subcommand("run", "Run an experiment and write the metric CSV");
    run->add_option("--config", config_path, "Config file (key = value lines)");
    run->add_option("--out", out_path, "Output CSV path");
    run->add_option("--ucb-dump", ucb_dump,
                    "Path prefix for per-round UCB grid dumps (first trial only)");
    add_config_flags(run, overrides);

    std::string instance_path;
    double grid_step = 0.0;
    auto* optimal = app.add_subcommand("optimal", "Print the exact grid optimum of an instance");
    optimal->add_option("--instance", instance_path, "Instance JSON file")->required();
    optimal->add_option("--grid-step", grid_step,
                        "Effort grid step (default: discretization gap / 4)");

    auto* validate = app.add_subcommand("validate", "Lint an instance file");
    validate->add_option("--instance", instance_path, "Instance JSON file")->required();

    std::string ablate_key;
    std::string ablate_values;
    std::string out_dir = "ablation";
    auto* ablate = app.add_subcommand("ablate", "Sweep one config key across values");
    ablate->add_option("--config", config_path, "Config file");
    ablate->add_option("--key", ablate_key, "Config key to sweep")->required();
    ablate->add_option("--values", ablate_values, "Comma-separated values")->required();
    ablate->add_option("--out", out_dir, "Output directory");
    add_config_flags(ablate, overrides);

    int gen_targets = 25;
    std::uint64_t gen_seed = 1;
    double gen_budget = 1.0;
    double gen_gap = 0.25;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic instance file");
    generate->add_option("--n", gen_targets, "Number of targets");
    generate->add_option("--seed", gen_seed, "Generator seed");
    generate->add_option("--budget", gen_budget, "Total effort budget");
    generate->add_option("--gap", gen_gap, "Discretization gap");
    generate->add_option("--out", gen_out, "Output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            return cmd_run(build_config(config_path, overrides, ucb_dump), out_path);
        }
        if (optimal->parsed()) return cmd_optimal(instance_path, grid_step);
        if (validate->parsed()) return cmd_validate(instance_path);
        if (ablate->parsed()) {
            return cmd_ablate(build_config(config_path, overrides, ""), ablate_key,
                              ablate_values, out_dir);
        }
        if (generate->parsed()) {
            return cmd_generate(gen_targets, gen_seed, gen_budget, gen_gap, gen_out);
        }
    } catch (const lizard::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
