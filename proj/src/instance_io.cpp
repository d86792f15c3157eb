#include "lizard/instance_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lizard {

namespace {

using nlohmann::json;

std::string mode_name(DistanceMode mode) {
    return mode == DistanceMode::euclidean_features ? "euclidean-features"
                                                    : "reward-sup-distance";
}

DistanceMode mode_from_name(const std::string& name) {
    if (name == "euclidean-features") return DistanceMode::euclidean_features;
    if (name == "reward-sup-distance") return DistanceMode::reward_sup_distance;
    throw std::invalid_argument("unknown distance_mode: " + name);
}

}  // namespace

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json doc = json::parse(in);

    ProblemInstance inst;
    inst.budget = doc.at("budget").get<double>();
    inst.lipschitz_constant = doc.at("lipschitz_constant").get<double>();
    inst.distance_mode = mode_from_name(doc.at("distance_mode").get<std::string>());
    inst.discretization =
        make_uniform_discretization(doc.at("discretization_gap").get<double>());

    const int n = doc.at("n_targets").get<int>();
    const auto& features = doc.at("features");
    const auto& knots = doc.at("reward_knots");
    if (static_cast<int>(features.size()) != n || static_cast<int>(knots.size()) != n) {
        throw std::runtime_error("instance file: per-target arrays do not match n_targets");
    }
    inst.targets.resize(n);
    for (int i = 0; i < n; ++i) {
        inst.targets[i].features = features[i].get<std::vector<double>>();
        for (const auto& pair : knots[i]) {
            inst.targets[i].reward.knots.push_back(
                {pair.at(0).get<double>(), pair.at(1).get<double>()});
        }
    }
    compute_distance_matrix(inst);
    return inst;
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
    json doc;
    doc["n_targets"] = inst.num_targets();
    doc["budget"] = inst.budget;
    doc["lipschitz_constant"] = inst.lipschitz_constant;
    doc["distance_mode"] = mode_name(inst.distance_mode);
    doc["discretization_gap"] = inst.discretization.min_gap();
    json features = json::array();
    json knots = json::array();
    for (const auto& target : inst.targets) {
        features.push_back(target.features);
        json target_knots = json::array();
        for (const auto& knot : target.reward.knots) {
            target_knots.push_back({knot.effort, knot.value});
        }
        knots.push_back(std::move(target_knots));
    }
    doc["features"] = std::move(features);
    doc["reward_knots"] = std::move(knots);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << doc.dump(2) << "\n";
}

HistoryLog load_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open history file: " + path);
    HistoryLog log;
    std::string line;
    if (!std::getline(in, line)) return log;  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ObservationRecord rec;
        char* cursor = line.data();
        auto next_field = [&]() -> double {
            char* end = nullptr;
            const double v = std::strtod(cursor, &end);
            cursor = (*end == ',') ? end + 1 : end;
            return v;
        };
        rec.timestep = static_cast<long>(next_field());
        rec.target = static_cast<int>(next_field());
        rec.effort_level = static_cast<int>(next_field());
        rec.effort = next_field();
        rec.outcome = static_cast<int>(next_field());
        log.records.push_back(rec);
    }
    return log;
}

void save_history(const HistoryLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history file: " + path);
    out << "timestep,target,effort_level,effort,outcome\n";
    char buf[64];
    for (const auto& rec : log.records) {
        std::snprintf(buf, sizeof(buf), "%.12g", rec.effort);
        out << rec.timestep << ',' << rec.target << ',' << rec.effort_level << ',' << buf << ','
            << rec.outcome << '\n';
    }
}

}  // namespace lizard
