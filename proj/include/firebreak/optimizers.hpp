#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firebreak/fire_engine.hpp"
#include "firebreak/landscape.hpp"
#include "firebreak/objective.hpp"
#include "firebreak/placement.hpp"
#include "firebreak/scenario.hpp"

namespace firebreak {

// Everything a search needs to evaluate a layout. Holds the landscape by
// reference; the landscape must outlive the problem.
struct FirebreakProblem {
    const Landscape& landscape;
    ScenarioSampler scenario;
    SpreadParams params;
    std::shared_ptr<const BlockShape> shape = default_shape();
    double alpha = 0.05;

    std::size_t budget() const { return budget_cells(landscape, alpha); }
};

struct GAConfig {
    std::size_t population_size = 20;
    std::size_t eval_replications = 50;
    double mutation_rate = 0.2;
    std::size_t mutation_moves = 1;
    double time_budget = 120.0;  // seconds
    std::optional<std::size_t> max_generations;
    // Reuse the generation-0 scenario draws in every generation.
    bool freeze_evaluation_seeds = false;
    std::size_t workers = 1;

    void validate() const;  // throws ConfigError
};

struct GRASPConfig {
    std::size_t rcl_size = 5;
    std::size_t construction_samples = 50;
    std::size_t local_search_iterations = 50;
    double time_budget = 120.0;  // seconds
    std::optional<std::size_t> max_restarts;
    int local_search_radius = 5;  // Chebyshev distance for block relocation
    std::size_t workers = 1;

    void validate() const;  // throws ConfigError
};

// Estimates are percent of flammable cells burned.
struct TracePoint {
    double elapsed_s = 0.0;
    double estimate_mean = 0.0;
    std::optional<double> estimate_stderr;
    std::string solution_id;
};

class SearchTrace {
public:
    // Elapsed values are kept strictly increasing.
    void record(double elapsed_s, double estimate_mean, std::optional<double> estimate_stderr,
                std::string solution_id);
    void record(double elapsed_s, const Estimate& estimate, std::size_t flammable_cells,
                std::string solution_id);

    const std::vector<TracePoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }

    // Columns: elapsed_s,estimate_mean,estimate_stderr,solution_id
    void write_csv(std::ostream& out) const;

private:
    std::vector<TracePoint> points_;
};

struct SearchResult {
    Solution solution;
    // In-loop estimate of the returned solution; noisy, not a final value.
    std::optional<Estimate> estimate;
    SearchTrace trace;
    std::size_t iterations = 0;  // GA generations or GRASP restarts
};

// Generational GA: evaluate, keep the better half, refill by block-pool
// crossover of two random survivors, mutate by block relocation.
// `initial_population`, when given, must hold population_size feasible solutions.
SearchResult ga_optimize(const FirebreakProblem& problem, const GAConfig& config,
                         std::uint64_t seed, std::vector<Solution> initial_population = {});

// Block-pool crossover: pooled parent blocks sampled without replacement
// while they fit the budget.
Solution crossover(const FirebreakProblem& problem, const Solution& a, const Solution& b,
                   Rng& rng);
// Relocates `moves` random blocks to random feasible positions.
Solution mutate(const FirebreakProblem& problem, const Solution& s, std::size_t moves, Rng& rng);

// GRASP with burn-frequency greedy construction and relocation local search.
SearchResult grasp_optimize(const FirebreakProblem& problem, const GRASPConfig& config,
                            std::uint64_t seed);

// Greedy block placement on a per-cell weight map: repeatedly adds the block
// with the largest weight over its not-yet-treated cells (ties: lowest anchor,
// then orientation) until nothing fits the budget. With `scenario`, blocks that
// would remove the last eligible ignition cell are skipped.
Solution greedy_from_frequency(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                               std::span<const double> weights, std::size_t budget,
                               const ScenarioSampler* scenario = nullptr);

// Simulates R untreated fires and places blocks greedily on burn frequency.
Solution greedy_baseline(const FirebreakProblem& problem, std::size_t replications,
                         std::uint64_t seed, std::size_t workers = 1);

Solution random_baseline(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                         double alpha, std::uint64_t seed);

} // namespace firebreak
