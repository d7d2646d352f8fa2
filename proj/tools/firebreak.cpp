#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "firebreak/errors.hpp"
#include "firebreak/harness.hpp"

namespace fs = std::filesystem;
using namespace firebreak;

namespace {

// Options shared by every subcommand that needs a landscape and a scenario.
struct Common {
    std::string config;
    std::string fuel_raster;
    std::string fuel_lookup;
    int width = 100;
    int height = 100;
    double spread_prob = 0.35;
    std::string scenario;
    std::string weather;
    double wind_speed = -1.0;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 1;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON run configuration");
        app->add_option("--fuel-raster", fuel_raster, "fuel ASCII grid");
        app->add_option("--fuel-lookup", fuel_lookup, "fuel lookup table");
        app->add_option("--width", width, "synthetic landscape width");
        app->add_option("--height", height, "synthetic landscape height");
        app->add_option("--spread-prob", spread_prob, "synthetic base spread probability");
        app->add_option("--scenario", scenario, "m1, m2 or m3");
        app->add_option("--weather", weather, "weather file for m3");
        app->add_option("--wind-speed", wind_speed, "wind speed for m1/m2 (km/h)");
        app->add_option("--workers", workers, "worker threads");
        app->add_option("--seed", seed, "master seed");
    }

    ExperimentConfig experiment() const {
        ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
        if (!fuel_raster.empty() || !fuel_lookup.empty()) {
            cfg.landscape.fuel_raster = fuel_raster;
            cfg.landscape.fuel_lookup = fuel_lookup;
        } else if (config.empty()) {
            cfg.landscape.synthetic_width = width;
            cfg.landscape.synthetic_height = height;
            cfg.landscape.synthetic_spread_prob = spread_prob;
        }
        if (!scenario.empty()) {
            cfg.scenario.name = parse_scenario_name(scenario);
        }
        if (!weather.empty()) {
            cfg.scenario.weather_file = weather;
        }
        if (wind_speed >= 0.0) {
            cfg.scenario.wind_speed = wind_speed;
        }
        cfg.workers = workers;
        return cfg;
    }
};

Solution load_solution_or_empty(const std::string& path, const Landscape& landscape,
                                std::shared_ptr<const BlockShape> shape) {
    return path.empty() ? Solution(shape) : read_solution(fs::path(path), landscape, shape);
}

AsciiGrid blank_grid(const Landscape& landscape) {
    AsciiGrid grid;
    grid.ncols = landscape.width();
    grid.nrows = landscape.height();
    grid.xllcorner = landscape.xllcorner();
    grid.yllcorner = landscape.yllcorner();
    grid.cellsize = landscape.cell_size();
    grid.values.assign(landscape.cell_count(), 0.0);
    return grid;
}

void print_estimate(const Estimate& e, std::size_t flammable) {
    std::printf("replications     %zu\n", e.replications);
    std::printf("mean loss        %.4f cells\n", e.mean_loss);
    std::printf("percent burned   %.4f\n", e.percent_burned);
    if (const auto se = e.std_err_percent(flammable)) {
        std::printf("std err          %.4f\n", *se);
    }
}

int run_simulate(const Common& common, const std::string& solution_path, std::size_t reps,
                 const std::string& output) {
    const ExperimentConfig cfg = common.experiment();
    const Landscape landscape = cfg.landscape.load();
    const ScenarioSampler scenario = cfg.scenario.build(landscape);
    const Solution solution = load_solution_or_empty(solution_path, landscape, cfg.shape());
    if (reps < 1) {
        throw ConfigError("replications must be >= 1");
    }
    const auto outcomes = run_replications(landscape, solution.mask(landscape), scenario,
                                           cfg.spread, reps, common.seed, common.workers);
    AsciiGrid raster = blank_grid(landscape);
    const auto counts = burn_counts(outcomes, landscape.cell_count());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        raster.values[j] = static_cast<double>(counts[j]) / static_cast<double>(reps);
    }
    if (reps == 1) {
        std::printf("loss %zu cells (%.4f%%)\n", outcomes[0].loss,
                    100.0 * static_cast<double>(outcomes[0].loss) /
                        static_cast<double>(landscape.flammable_count()));
    } else {
        print_estimate(estimate_from_outcomes(outcomes, landscape.flammable_count()),
                       landscape.flammable_count());
    }
    if (!output.empty()) {
        write_ascii_grid(fs::path(output), raster);
    }
    return 0;
}

int run_patterns(const Common& common, std::vector<double> alphas, std::size_t trials,
                 std::size_t reps, const std::string& output) {
    const ExperimentConfig cfg = common.experiment();
    const Landscape landscape = cfg.landscape.load();
    const ScenarioSampler scenario = cfg.scenario.build(landscape);
    if (alphas.empty()) {
        alphas = cfg.alphas;
    }
    const PatternReport report = assess_patterns(landscape, scenario, cfg.spread, alphas, trials,
                                                 reps, common.seed, cfg.shape(), common.workers);
    std::cout << "cluster\n";
    report.cluster.write_csv(std::cout);
    std::cout << "scattered\n";
    report.scattered.write_csv(std::cout);
    if (!output.empty()) {
        write_pattern_report(report, fs::path(output));
    }
    return 0;
}

int run_optimize(const Common& common, const std::string& algo, double alpha,
                 std::optional<double> time_budget, std::optional<std::size_t> max_iterations,
                 std::size_t final_reps, const std::string& output) {
    ExperimentConfig cfg = common.experiment();
    if (time_budget) {
        cfg.ga.time_budget = *time_budget;
        cfg.grasp.time_budget = *time_budget;
    }
    if (max_iterations) {
        cfg.ga.max_generations = *max_iterations;
        cfg.grasp.max_restarts = *max_iterations;
    }
    cfg.validate();
    const Algorithm algorithm = parse_algorithm(algo);
    const Landscape landscape = cfg.landscape.load();
    const FirebreakProblem problem{landscape, cfg.scenario.build(landscape), cfg.spread,
                                   cfg.shape(), alpha};
    const SearchResult result = run_algorithm(
        algorithm, problem, cfg, optimizer_seed(algorithm, common.seed, alpha), common.workers);
    const LossEstimate final_estimate =
        evaluate_with_cost(landscape, result.solution, problem.scenario, cfg.spread, final_reps,
                           final_evaluation_seed(common.seed, alpha), common.workers);

    std::printf("algorithm        %s\n", std::string(to_string(algorithm)).c_str());
    std::printf("treated cells    %zu of budget %zu\n", result.solution.treated_count(),
                problem.budget());
    std::printf("iterations       %zu\n", result.iterations);
    print_estimate(final_estimate.estimate, landscape.flammable_count());
    std::printf("lost cells       %.4f (%.4f%%)\n", final_estimate.total,
                final_estimate.total_percent);
    if (!output.empty()) {
        const fs::path dir(output);
        fs::create_directories(dir);
        write_solution(dir / "solution.csv", landscape, result.solution);
        write_ascii_grid(dir / "solution.asc", treated_raster(landscape, result.solution));
        std::ofstream trace(dir / "trace.csv", std::ios::binary);
        result.trace.write_csv(trace);
    }
    return 0;
}

int run_evaluate(const Common& common, const std::string& solution_path, std::size_t reps) {
    const ExperimentConfig cfg = common.experiment();
    const Landscape landscape = cfg.landscape.load();
    const ScenarioSampler scenario = cfg.scenario.build(landscape);
    const Solution solution = read_solution(fs::path(solution_path), landscape, cfg.shape());
    const LossEstimate e = evaluate_with_cost(landscape, solution, scenario, cfg.spread, reps,
                                              common.seed, common.workers);
    std::printf("treated cells    %zu\n", solution.treated_count());
    print_estimate(e.estimate, landscape.flammable_count());
    std::printf("lost cells       %.4f (%.4f%%)\n", e.total, e.total_percent);
    return 0;
}

int run_compare(const std::string& config_path, const std::string& output,
                std::optional<std::size_t> workers) {
    ExperimentConfig cfg = load_config(config_path);
    if (workers) {
        cfg.workers = *workers;
    }
    if (!output.empty()) {
        cfg.output_dir = output;
    }
    const Landscape landscape = cfg.landscape.load();
    const RunReport report = run_comparison(cfg, landscape);
    write_report(report, landscape, cfg.output_dir);
    std::size_t failed = 0;
    for (const auto& run : report.runs) {
        if (!run.ok()) {
            ++failed;
            std::fprintf(stderr, "run %s alpha=%s seed=%llu failed: %s\n",
                         std::string(to_string(run.algorithm)).c_str(),
                         alpha_label(run.alpha).c_str(),
                         static_cast<unsigned long long>(run.seed), run.error->c_str());
        }
    }
    for (Algorithm algorithm : report.algorithms) {
        std::cout << to_string(algorithm) << " (percent burned)\n";
        burned_table(report, algorithm).write_csv(std::cout);
    }
    std::printf("wrote %s\n", cfg.output_dir.string().c_str());
    return failed == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Firebreak placement by simulation-based optimization"};
    app.require_subcommand(1);

    Common common;
    std::string solution_path;
    std::string output;
    std::size_t reps = 1;
    std::vector<double> alphas;
    std::size_t trials = 5;
    std::string algo;
    double alpha = 0.05;
    std::optional<double> time_budget;
    std::optional<std::size_t> max_iterations;
    std::size_t final_reps = 1000;
    std::string config_path;
    std::optional<std::size_t> compare_workers;

    auto* simulate = app.add_subcommand("simulate", "simulate one fire or R replications");
    common.attach(simulate);
    simulate->add_option("--solution", solution_path, "firebreak solution file");
    simulate->add_option("--replications,-R", reps, "number of fires");
    simulate->add_option("--output,-o", output, "burn raster (.asc)");

    auto* patterns = app.add_subcommand("assess-patterns", "random block vs scattered layouts");
    common.attach(patterns);
    patterns->add_option("--alphas", alphas, "treated fractions");
    patterns->add_option("--trials", trials, "layouts per pattern and alpha");
    auto* pattern_reps = patterns->add_option("--replications,-R", reps, "fires per layout");
    pattern_reps->default_val(200);
    patterns->add_option("--output,-o", output, "output directory");

    auto* optimize = app.add_subcommand("optimize", "run one optimizer");
    common.attach(optimize);
    optimize->add_option("--algo", algo, "ga, grasp, random or greedy")->required();
    optimize->add_option("--alpha", alpha, "treated fraction of flammable cells");
    optimize->add_option("--time-budget", time_budget, "seconds");
    optimize->add_option("--max-iterations", max_iterations, "GA generations or GRASP restarts");
    optimize->add_option("--final-replications", final_reps, "fires for the final estimate");
    optimize->add_option("--output,-o", output, "output directory");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "estimate a solution's expected loss");
    common.attach(evaluate_cmd);
    evaluate_cmd->add_option("--solution", solution_path, "firebreak solution file")->required();
    auto* eval_reps = evaluate_cmd->add_option("--replications,-R", reps, "number of fires");
    eval_reps->default_val(1000);

    auto* compare = app.add_subcommand("compare", "multi-seed comparison from a config");
    compare->add_option("--config", config_path, "JSON run configuration")->required();
    compare->add_option("--output,-o", output, "output directory (overrides config)");
    compare->add_option("--workers", compare_workers, "worker threads (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*simulate) {
            return run_simulate(common, solution_path, reps, output);
        }
        if (*patterns) {
            return run_patterns(common, alphas, trials, reps, output);
        }
        if (*optimize) {
            return run_optimize(common, algo, alpha, time_budget, max_iterations, final_reps,
                                output);
        }
        if (*evaluate_cmd) {
            return run_evaluate(common, solution_path, reps);
        }
        if (*compare) {
            return run_compare(config_path, output, compare_workers);
        }
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const PlacementError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
