#include <stdexcept>

#include "firebreak/errors.hpp"
#include "firebreak/harness.hpp"
#include "firebreak/parallel.hpp"
#include "search_support.hpp"

namespace firebreak {

SearchResult run_algorithm(Algorithm algorithm, const FirebreakProblem& problem,
                           const ExperimentConfig& config, std::uint64_t seed,
                           std::size_t workers) {
    switch (algorithm) {
    case Algorithm::GA: {
        GAConfig ga = config.ga;
        ga.workers = workers;
        return ga_optimize(problem, ga, seed);
    }
    case Algorithm::GRASP: {
        GRASPConfig grasp = config.grasp;
        grasp.workers = workers;
        return grasp_optimize(problem, grasp, seed);
    }
    case Algorithm::Random:
        return SearchResult{random_baseline(problem.landscape, problem.shape, problem.alpha, seed),
                            std::nullopt, {}, 0};
    case Algorithm::Greedy:
        return SearchResult{
            greedy_baseline(problem, config.greedy.replications, seed, workers), std::nullopt, {},
            0};
    }
    throw std::logic_error("unhandled algorithm");
}

const RunRecord& RunReport::at(Algorithm algorithm, double alpha, std::uint64_t seed) const {
    for (const auto& run : runs) {
        if (run.algorithm == algorithm && run.alpha == alpha && run.seed == seed) {
            return run;
        }
    }
    throw std::out_of_range("no run for " + std::string(to_string(algorithm)));
}

RunReport run_comparison(const ExperimentConfig& config) {
    const Landscape landscape = config.landscape.load();
    return run_comparison(config, landscape);
}

RunReport run_comparison(const ExperimentConfig& config, const Landscape& landscape) {
    config.validate();
    const ScenarioSampler scenario = config.scenario.build(landscape);
    const auto shape = config.shape();

    RunReport report;
    report.alphas = config.alphas;
    report.algorithms = config.algorithms;
    report.seeds = config.seeds;
    report.flammable_cells = landscape.flammable_count();
    report.final_replications = config.final_replications;
    for (Algorithm algorithm : config.algorithms) {
        for (double alpha : config.alphas) {
            for (std::uint64_t seed : config.seeds) {
                RunRecord run;
                run.algorithm = algorithm;
                run.alpha = alpha;
                run.seed = seed;
                run.final_seed = final_evaluation_seed(seed, alpha);
                report.runs.push_back(std::move(run));
            }
        }
    }

    const std::size_t inner = std::max<std::size_t>(1, config.workers / report.runs.size());
    parallel_for(report.runs.size(), config.workers, [&](std::size_t i) {
        RunRecord& run = report.runs[i];
        detail::Stopwatch clock;
        try {
            const FirebreakProblem problem{landscape, scenario, config.spread, shape, run.alpha};
            SearchResult result = run_algorithm(
                run.algorithm, problem, config, optimizer_seed(run.algorithm, run.seed, run.alpha),
                inner);
            const auto feasibility = is_feasible(landscape, result.solution, run.alpha);
            if (!feasibility) {
                throw ValidationError("infeasible solution: " + feasibility.violations.front());
            }
            run.lost_cells = evaluate_with_cost(landscape, result.solution, scenario, config.spread,
                                                config.final_replications, run.final_seed, inner);
            run.estimate = run.lost_cells.estimate;
            run.iterations = result.iterations;
            run.trace = std::move(result.trace);
            run.solution = std::move(result.solution);
        } catch (const std::exception& e) {
            run.error = e.what();
        }
        run.wall_seconds = clock.elapsed();
    });
    return report;
}

} // namespace firebreak
