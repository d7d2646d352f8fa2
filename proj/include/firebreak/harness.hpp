#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firebreak/fire_engine.hpp"
#include "firebreak/landscape.hpp"
#include "firebreak/objective.hpp"
#include "firebreak/optimizers.hpp"
#include "firebreak/placement.hpp"
#include "firebreak/scenario.hpp"

namespace firebreak {

inline constexpr std::array<double, 7> kDefaultAlphas{0.01, 0.03, 0.05, 0.075, 0.10, 0.125, 0.15};

enum class Algorithm { GA, GRASP, Random, Greedy };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view token);  // ga|grasp|random|greedy

// Either a fuel raster with its lookup table, or a homogeneous synthetic grid.
struct LandscapeSource {
    std::optional<std::filesystem::path> fuel_raster;
    std::optional<std::filesystem::path> fuel_lookup;
    TopographyRasters topography;
    int synthetic_width = 100;
    int synthetic_height = 100;
    double synthetic_spread_prob = 0.35;
    double synthetic_cell_size = 100.0;

    Landscape load() const;
};

struct ScenarioConfig {
    ScenarioName name = ScenarioName::M1;
    double central_fraction = kDefaultCentralFraction;
    double wind_speed = 20.0;
    std::optional<std::filesystem::path> weather_file;  // required for M3

    ScenarioSampler build(const Landscape& landscape) const;
};

struct GreedyConfig {
    std::size_t replications = 1000;
};

struct ExperimentConfig {
    LandscapeSource landscape;
    SpreadParams spread;
    ScenarioConfig scenario;
    std::vector<double> alphas{kDefaultAlphas.begin(), kDefaultAlphas.end()};
    std::vector<Algorithm> algorithms{Algorithm::GA, Algorithm::GRASP, Algorithm::Random,
                                      Algorithm::Greedy};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t final_replications = 1000;
    std::size_t workers = 1;
    std::filesystem::path output_dir = "results";
    std::optional<std::filesystem::path> shape_file;
    GAConfig ga;
    GRASPConfig grasp;
    GreedyConfig greedy;

    void validate() const;  // throws ConfigError
    std::shared_ptr<const BlockShape> shape() const;
};

// JSON configuration. Relative paths resolve against `base_dir`. A top-level
// "time_budget" applies to both metaheuristics unless their sections set one.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Seed of the final evaluation for one (seed, alpha) cell of the comparison;
// shared by every algorithm so that their final estimates use the same draws.
std::uint64_t final_evaluation_seed(std::uint64_t seed, double alpha);
std::uint64_t optimizer_seed(Algorithm algorithm, std::uint64_t seed, double alpha);

// Runs one optimizer on one problem with the configured settings.
SearchResult run_algorithm(Algorithm algorithm, const FirebreakProblem& problem,
                           const ExperimentConfig& config, std::uint64_t seed,
                           std::size_t workers);

struct RunRecord {
    Algorithm algorithm = Algorithm::Random;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t final_seed = 0;
    std::optional<std::string> error;  // set when the run failed
    std::optional<Solution> solution;
    Estimate estimate;
    LossEstimate lost_cells;
    std::size_t iterations = 0;
    SearchTrace trace;
    double wall_seconds = 0.0;

    bool ok() const { return !error.has_value(); }
};

struct RunReport {
    std::vector<double> alphas;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    std::size_t flammable_cells = 0;
    std::size_t final_replications = 0;
    std::vector<RunRecord> runs;  // algorithm-major, then alpha, then seed

    const RunRecord& at(Algorithm algorithm, double alpha, std::uint64_t seed) const;
};

RunReport run_comparison(const ExperimentConfig& config);
RunReport run_comparison(const ExperimentConfig& config, const Landscape& landscape);

// Appendix-style table: one row per test, a Mean row, one column per alpha.
struct PercentTable {
    std::vector<double> alphas;
    std::vector<std::string> row_labels;
    std::vector<std::vector<std::optional<double>>> values;  // [row][alpha]

    std::vector<std::optional<double>> mean_row() const;
    void write_csv(std::ostream& out) const;
};

std::string alpha_label(double alpha);  // 0.125 -> "12.5%"
// Arithmetic mean of the present values; nullopt if none.
std::optional<double> mean_of(const std::vector<std::optional<double>>& values);

PercentTable burned_table(const RunReport& report, Algorithm algorithm);
// (mean loss + treated cells) as a percent of flammable cells.
PercentTable lost_cells_table(const RunReport& report, Algorithm algorithm);

// Writes runs.csv, burned_<algo>.csv, lost_cells_<algo>.csv, summary.json,
// solutions/ and traces/ into `dir`. Wall-clock data goes only to traces/ and
// timing.csv; everything else is a deterministic function of the config.
void write_report(const RunReport& report, const Landscape& landscape,
                  const std::filesystem::path& dir);

struct PatternReport {
    std::vector<double> alphas;
    std::size_t trials = 0;
    std::size_t replications = 0;
    PercentTable cluster;
    PercentTable scattered;
};

// For each alpha, `trials` random block layouts and `trials` random scattered
// layouts, each scored with `replications` fires. Trial t of both patterns
// shares its evaluation seed.
PatternReport assess_patterns(const Landscape& landscape, const ScenarioSampler& scenario,
                              const SpreadParams& params, const std::vector<double>& alphas,
                              std::size_t trials, std::size_t replications, std::uint64_t seed,
                              std::shared_ptr<const BlockShape> shape = default_shape(),
                              std::size_t workers = 1);

void write_pattern_report(const PatternReport& report, const std::filesystem::path& dir);

} // namespace firebreak
