#include <bit>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "firebreak/errors.hpp"
#include "firebreak/harness.hpp"

namespace firebreak {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::string_view section, std::set<std::string> known) {
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) {
            throw ConfigError("config: unknown key '" + item.key() + "' in " + std::string(section));
        }
    }
}

template <class T>
void read_key(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config: bad value for '") + key + "'");
        }
    }
}

template <class T>
void read_key(const json& j, const char* key, std::optional<T>& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        T value{};
        read_key(j, key, value);
        out = value;
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void read_path(const json& j, const char* key, const std::filesystem::path& base,
               std::optional<std::filesystem::path>& out) {
    std::optional<std::string> s;
    read_key(j, key, s);
    if (s) {
        out = resolve(base, *s);
    }
}

const json& section(const json& root, const char* key) {
    static const json empty = json::object();
    auto it = root.find(key);
    if (it == root.end()) {
        return empty;
    }
    if (!it->is_object()) {
        throw ConfigError(std::string("config: '") + key + "' must be an object");
    }
    return *it;
}

} // namespace

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::GA: return "ga";
    case Algorithm::GRASP: return "grasp";
    case Algorithm::Random: return "random";
    case Algorithm::Greedy: return "greedy";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view token) {
    for (Algorithm a : {Algorithm::GA, Algorithm::GRASP, Algorithm::Random, Algorithm::Greedy}) {
        if (token == to_string(a)) {
            return a;
        }
    }
    throw ConfigError("unknown algorithm '" + std::string(token) + "'");
}

Landscape LandscapeSource::load() const {
    if (fuel_raster.has_value() != fuel_lookup.has_value()) {
        throw ConfigError("config: fuel_raster and fuel_lookup must be given together");
    }
    if (fuel_raster) {
        return load_landscape(*fuel_raster, *fuel_lookup, topography);
    }
    if (synthetic_width < 1 || synthetic_height < 1) {
        throw ConfigError("config: synthetic landscape needs width and height >= 1");
    }
    if (!(synthetic_spread_prob >= 0.0 && synthetic_spread_prob <= 1.0)) {
        throw ConfigError("config: synthetic base_spread_prob must lie in [0,1]");
    }
    return synthetic_landscape(synthetic_width, synthetic_height, synthetic_spread_prob,
                               synthetic_cell_size);
}

ScenarioSampler ScenarioConfig::build(const Landscape& landscape) const {
    if (!(wind_speed >= 0.0)) {
        throw ConfigError("config: wind_speed must be >= 0");
    }
    switch (name) {
    case ScenarioName::M1:
        if (!(central_fraction > 0.0 && central_fraction <= 1.0)) {
            throw ConfigError("config: central_fraction must lie in (0,1]");
        }
        return make_m1(landscape, wind_speed, central_fraction);
    case ScenarioName::M2:
        return make_m2(wind_speed);
    case ScenarioName::M3:
        if (!weather_file) {
            throw ConfigError("config: scenario M3 needs a weather_file");
        }
        return make_m3(read_weather_file(*weather_file));
    case ScenarioName::Custom:
        break;
    }
    throw ConfigError("config: scenario must be m1, m2 or m3");
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) {
        throw ConfigError("config: seeds must not be empty");
    }
    if (alphas.empty()) {
        throw ConfigError("config: alphas must not be empty");
    }
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ConfigError("config: alpha values must lie in [0,1]");
        }
    }
    if (algorithms.empty()) {
        throw ConfigError("config: algorithms must not be empty");
    }
    if (final_replications < 2) {
        throw ConfigError("config: final_replications must be >= 2");
    }
    if (greedy.replications < 1) {
        throw ConfigError("config: greedy replications must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("config: workers must be >= 1");
    }
    spread.validate();
    ga.validate();
    grasp.validate();
}

std::shared_ptr<const BlockShape> ExperimentConfig::shape() const {
    if (shape_file) {
        return std::make_shared<const BlockShape>(BlockShape::load(*shape_file));
    }
    return default_shape();
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    reject_unknown(root, "config",
                   {"landscape", "spread", "scenario", "alphas", "algorithms", "seeds",
                    "time_budget", "final_replications", "workers", "output_dir", "shape_file",
                    "ga", "grasp", "greedy"});

    ExperimentConfig cfg;

    const json& land = section(root, "landscape");
    reject_unknown(land, "landscape",
                   {"fuel_raster", "fuel_lookup", "elevation", "slope", "aspect", "width", "height",
                    "base_spread_prob", "cell_size"});
    read_path(land, "fuel_raster", base_dir, cfg.landscape.fuel_raster);
    read_path(land, "fuel_lookup", base_dir, cfg.landscape.fuel_lookup);
    read_path(land, "elevation", base_dir, cfg.landscape.topography.elevation);
    read_path(land, "slope", base_dir, cfg.landscape.topography.slope);
    read_path(land, "aspect", base_dir, cfg.landscape.topography.aspect);
    read_key(land, "width", cfg.landscape.synthetic_width);
    read_key(land, "height", cfg.landscape.synthetic_height);
    read_key(land, "base_spread_prob", cfg.landscape.synthetic_spread_prob);
    read_key(land, "cell_size", cfg.landscape.synthetic_cell_size);

    const json& spread = section(root, "spread");
    reject_unknown(spread, "spread",
                   {"step_minutes", "duration_hours", "wind_aligned_factor", "wind_opposed_factor",
                    "wind_cross_factor", "diagonal_attenuation", "wind_speed_scale"});
    read_key(spread, "step_minutes", cfg.spread.step_minutes);
    read_key(spread, "duration_hours", cfg.spread.duration_hours);
    read_key(spread, "wind_aligned_factor", cfg.spread.wind_aligned_factor);
    read_key(spread, "wind_opposed_factor", cfg.spread.wind_opposed_factor);
    read_key(spread, "wind_cross_factor", cfg.spread.wind_cross_factor);
    read_key(spread, "diagonal_attenuation", cfg.spread.diagonal_attenuation);
    read_key(spread, "wind_speed_scale", cfg.spread.wind_speed_scale);

    const json& scen = section(root, "scenario");
    reject_unknown(scen, "scenario", {"name", "central_fraction", "wind_speed", "weather_file"});
    std::string name = "m1";
    read_key(scen, "name", name);
    try {
        cfg.scenario.name = parse_scenario_name(name);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    read_key(scen, "central_fraction", cfg.scenario.central_fraction);
    read_key(scen, "wind_speed", cfg.scenario.wind_speed);
    read_path(scen, "weather_file", base_dir, cfg.scenario.weather_file);

    read_key(root, "alphas", cfg.alphas);
    if (auto it = root.find("algorithms"); it != root.end()) {
        std::vector<std::string> names;
        read_key(root, "algorithms", names);
        cfg.algorithms.clear();
        for (const auto& n : names) {
            cfg.algorithms.push_back(parse_algorithm(n));
        }
    }
    read_key(root, "seeds", cfg.seeds);
    read_key(root, "final_replications", cfg.final_replications);
    read_key(root, "workers", cfg.workers);
    std::optional<std::string> out;
    read_key(root, "output_dir", out);
    if (out) {
        cfg.output_dir = resolve(base_dir, *out);
    }
    read_path(root, "shape_file", base_dir, cfg.shape_file);

    std::optional<double> budget;
    read_key(root, "time_budget", budget);
    if (budget) {
        cfg.ga.time_budget = *budget;
        cfg.grasp.time_budget = *budget;
    }

    const json& ga = section(root, "ga");
    reject_unknown(ga, "ga",
                   {"population_size", "eval_replications", "mutation_rate", "mutation_moves",
                    "time_budget", "max_generations", "freeze_evaluation_seeds"});
    read_key(ga, "population_size", cfg.ga.population_size);
    read_key(ga, "eval_replications", cfg.ga.eval_replications);
    read_key(ga, "mutation_rate", cfg.ga.mutation_rate);
    read_key(ga, "mutation_moves", cfg.ga.mutation_moves);
    read_key(ga, "time_budget", cfg.ga.time_budget);
    read_key(ga, "max_generations", cfg.ga.max_generations);
    read_key(ga, "freeze_evaluation_seeds", cfg.ga.freeze_evaluation_seeds);

    const json& grasp = section(root, "grasp");
    reject_unknown(grasp, "grasp",
                   {"rcl_size", "construction_samples", "local_search_iterations", "time_budget",
                    "max_restarts", "local_search_radius"});
    read_key(grasp, "rcl_size", cfg.grasp.rcl_size);
    read_key(grasp, "construction_samples", cfg.grasp.construction_samples);
    read_key(grasp, "local_search_iterations", cfg.grasp.local_search_iterations);
    read_key(grasp, "time_budget", cfg.grasp.time_budget);
    read_key(grasp, "max_restarts", cfg.grasp.max_restarts);
    read_key(grasp, "local_search_radius", cfg.grasp.local_search_radius);

    const json& greedy = section(root, "greedy");
    reject_unknown(greedy, "greedy", {"replications"});
    read_key(greedy, "replications", cfg.greedy.replications);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    return parse_config(in, path.parent_path());
}

std::uint64_t final_evaluation_seed(std::uint64_t seed, double alpha) {
    return mix_seed(seed, 0x4001, std::bit_cast<std::uint64_t>(alpha));
}

std::uint64_t optimizer_seed(Algorithm algorithm, std::uint64_t seed, double alpha) {
    return mix_seed(mix_seed(seed, 0x4100 + static_cast<std::uint64_t>(algorithm)),
                    std::bit_cast<std::uint64_t>(alpha));
}

} // namespace firebreak
