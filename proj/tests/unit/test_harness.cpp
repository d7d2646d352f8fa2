#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "firebreak/errors.hpp"
#include "firebreak/harness.hpp"
#include "helpers.hpp"

using namespace firebreak;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig parse(const std::string& text, const fs::path& base = {}) {
    std::istringstream in(text);
    return parse_config(in, base);
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.landscape.synthetic_width = 40;
    cfg.landscape.synthetic_height = 40;
    cfg.alphas = {0.05, 0.1};
    cfg.seeds = {1, 2};
    cfg.final_replications = 50;
    cfg.ga.population_size = 4;
    cfg.ga.eval_replications = 5;
    cfg.ga.max_generations = 2;
    cfg.grasp.construction_samples = 5;
    cfg.grasp.local_search_iterations = 2;
    cfg.grasp.max_restarts = 1;
    cfg.greedy.replications = 20;
    return cfg;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FIREBREAK_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config defaults") {
    const ExperimentConfig cfg = parse("{}");
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(cfg.final_replications == 1000);
    CHECK(cfg.alphas.size() == 7);
    CHECK(cfg.alphas[5] == 0.125);
    CHECK(cfg.algorithms.size() == 4);
    CHECK(cfg.ga.time_budget == 120.0);
    CHECK(cfg.grasp.time_budget == 120.0);
    CHECK(cfg.scenario.name == ScenarioName::M1);
    CHECK(cfg.scenario.wind_speed == 20.0);
    CHECK(cfg.shape()->name() == "u20");
}

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse(R"({
        // comments are allowed
        "landscape": {"fuel_raster": "fuel.asc", "fuel_lookup": "/abs/fuels.csv"},
        "spread": {"step_minutes": 15, "wind_aligned_factor": 3.0},
        "scenario": {"name": "m3", "weather_file": "wx.csv"},
        "alphas": [0.01, 0.125],
        "algorithms": ["ga", "random"],
        "seeds": [7],
        "time_budget": 30,
        "final_replications": 200,
        "workers": 2,
        "output_dir": "out",
        "ga": {"population_size": 10, "max_generations": 5},
        "grasp": {"time_budget": 10, "max_restarts": 3},
        "greedy": {"replications": 50}
    })",
                                       "/base");
    CHECK(cfg.landscape.fuel_raster == fs::path("/base/fuel.asc"));
    CHECK(cfg.landscape.fuel_lookup == fs::path("/abs/fuels.csv"));
    CHECK(cfg.spread.step_minutes == 15);
    CHECK(cfg.spread.wind_aligned_factor == 3.0);
    CHECK(cfg.scenario.name == ScenarioName::M3);
    CHECK(cfg.scenario.weather_file == fs::path("/base/wx.csv"));
    CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::GA, Algorithm::Random});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{7});
    CHECK(cfg.ga.time_budget == 30);
    CHECK(cfg.grasp.time_budget == 10);
    CHECK(cfg.ga.max_generations == 5u);
    CHECK(cfg.grasp.max_restarts == 3u);
    CHECK(cfg.ga.population_size == 10);
    CHECK(cfg.greedy.replications == 50);
    CHECK(cfg.output_dir == fs::path("/base/out"));
    CHECK(cfg.workers == 2);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse(R"({"seeds": []})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"final_replications": 1})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"colour": "red"})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"ga": {"population": 10}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"ga": {"population_size": 9}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"algorithms": ["tabu"]})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"alphas": [1.5]})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"spread": {"step_minutes": "x"}})"), ConfigError);
    CHECK_THROWS_AS(parse("{not json"), ConfigError);
    const ExperimentConfig m3 = parse(R"({"scenario": {"name": "m3"}})");
    CHECK_THROWS_AS(m3.scenario.build(synthetic_landscape(5, 5, 0.3)), ConfigError);
}

TEST_CASE("table labels and mean rows") {
    CHECK(alpha_label(0.125) == "12.5%");
    CHECK(alpha_label(0.075) == "7.5%");
    CHECK(alpha_label(0.01) == "1%");
    CHECK(alpha_label(0.1) == "10%");

    PercentTable t;
    t.alphas = {0.01};
    for (double v : {31.8, 31.9, 31.4, 31.3, 31.5}) {
        t.row_labels.push_back(std::to_string(t.row_labels.size() + 1));
        t.values.push_back({v});
    }
    REQUIRE(t.mean_row()[0].has_value());
    CHECK(*t.mean_row()[0] == doctest::Approx(31.58));
    std::ostringstream out;
    t.write_csv(out);
    CHECK(out.str() == "test,1%\n1,31.8000\n2,31.9000\n3,31.4000\n4,31.3000\n5,31.5000\n"
                       "Mean,31.5800\n");

    CHECK_FALSE(mean_of({std::nullopt}).has_value());
    CHECK(*mean_of({1.0, std::nullopt, 3.0}) == 2.0);
}

TEST_CASE("random-only comparison yields one row per seed plus a mean") {
    ExperimentConfig cfg;
    cfg.algorithms = {Algorithm::Random};
    cfg.alphas = {0.01};
    cfg.final_replications = 100;
    const Landscape l = cfg.landscape.load();
    const RunReport report = run_comparison(cfg, l);
    REQUIRE(report.runs.size() == 5);
    const PercentTable t = burned_table(report, Algorithm::Random);
    CHECK(t.values.size() == 5);
    for (const auto& row : t.values) {
        REQUIRE(row[0].has_value());
        CHECK(*row[0] >= 0.0);
        CHECK(*row[0] <= 100.0);
    }
    std::ostringstream out;
    t.write_csv(out);
    std::istringstream lines(out.str());
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        rows.push_back(line);
    }
    CHECK(rows.size() == 7);
    CHECK(rows.back().rfind("Mean,", 0) == 0);
}

TEST_CASE("comparison reports are deterministic and reproducible") {
    const ExperimentConfig cfg = small_config();
    const Landscape l = cfg.landscape.load();
    const auto dir = testing::temp_dir("compare");

    ExperimentConfig one = cfg;
    one.workers = 1;
    write_report(run_comparison(one, l), l, dir / "w1");
    ExperimentConfig many = cfg;
    many.workers = 4;
    const RunReport report = run_comparison(many, l);
    write_report(report, l, dir / "w4");

    for (const char* name : {"runs.csv", "summary.json", "burned_ga.csv", "burned_grasp.csv",
                             "burned_random.csv", "burned_greedy.csv", "lost_cells_ga.csv",
                             "lost_cells_greedy.csv"}) {
        CAPTURE(name);
        CHECK(slurp(dir / "w1" / name) == slurp(dir / "w4" / name));
        CHECK_FALSE(slurp(dir / "w1" / name).empty());
    }
    for (const auto& entry : fs::directory_iterator(dir / "w1" / "solutions")) {
        CHECK(slurp(entry.path()) == slurp(dir / "w4" / "solutions" / entry.path().filename()));
    }

    // Reloading a reported solution and evaluating it with the row's final seed
    // reproduces the reported mean.
    const ScenarioSampler scenario = cfg.scenario.build(l);
    const auto summary = nlohmann::json::parse(slurp(dir / "w4" / "summary.json"));
    std::size_t checked = 0;
    for (const auto& row : summary["runs"]) {
        REQUIRE(row["status"] == "ok");
        const Solution s = read_solution(dir / "w4" / row["solution_file"].get<std::string>(), l);
        const Estimate e = evaluate(l, s, scenario, cfg.spread, cfg.final_replications,
                                    row["final_seed"].get<std::uint64_t>());
        CHECK(e.percent_burned == doctest::Approx(row["percent_burned"].get<double>()).epsilon(1e-12));
        CHECK(s.id() == row["solution_id"].get<std::string>());
        CHECK(is_feasible(l, s, row["alpha"].get<double>()).feasible);
        ++checked;
    }
    CHECK(checked == 16);

    // Baselines share the optimizers' alpha and final evaluation seed.
    for (double alpha : cfg.alphas) {
        for (std::uint64_t seed : cfg.seeds) {
            const auto& ga = report.at(Algorithm::GA, alpha, seed);
            CHECK(report.at(Algorithm::Random, alpha, seed).final_seed == ga.final_seed);
            CHECK(report.at(Algorithm::Greedy, alpha, seed).final_seed == ga.final_seed);
        }
    }

    // Lost cells: burned plus treated, as a percent of flammable cells.
    const PercentTable lost = lost_cells_table(report, Algorithm::GA);
    const PercentTable burned = burned_table(report, Algorithm::GA);
    for (std::size_t r = 0; r < cfg.seeds.size(); ++r) {
        for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
            const auto& run = report.at(Algorithm::GA, cfg.alphas[a], cfg.seeds[r]);
            CHECK(*lost.values[r][a] ==
                  doctest::Approx(*burned.values[r][a] +
                                  100.0 * static_cast<double>(run.solution->treated_count()) / 1600.0));
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("a failing run does not stop its siblings") {
    ExperimentConfig cfg = small_config();
    cfg.algorithms = {Algorithm::Random};
    cfg.alphas = {0.001, 0.05};
    const Landscape l = cfg.landscape.load();
    const RunReport report = run_comparison(cfg, l);
    CHECK_FALSE(report.at(Algorithm::Random, 0.001, 1).ok());
    CHECK(report.at(Algorithm::Random, 0.05, 1).ok());
    const auto dir = testing::temp_dir("failing");
    write_report(report, l, dir);
    const std::string runs = slurp(dir / "runs.csv");
    CHECK(runs.find("failed") != std::string::npos);
    const std::string table = slurp(dir / "burned_random.csv");
    CHECK(table.find("NA") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("pattern assessment") {
    const Landscape l = synthetic_landscape(50, 50, 0.35);
    const PatternReport none =
        assess_patterns(l, make_m2(), SpreadParams{}, {0.0}, 3, 30, 1);
    for (std::size_t t = 0; t < 3; ++t) {
        CHECK(*none.cluster.values[t][0] == *none.scattered.values[t][0]);
    }
    CHECK(*none.cluster.mean_row()[0] == *none.scattered.mean_row()[0]);

    const PatternReport two = assess_patterns(l, make_m2(), SpreadParams{}, {0.05, 0.1}, 2, 20, 4);
    CHECK(two.cluster.values.size() == 2);
    CHECK(two.cluster.values[0].size() == 2);
    CHECK_THROWS_AS(assess_patterns(l, make_m2(), SpreadParams{}, {0.05}, 0, 20, 4), ConfigError);

    const auto dir = testing::temp_dir("patterns");
    write_pattern_report(two, dir);
    CHECK(slurp(dir / "patterns_cluster.csv").rfind("test,5%,10%\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
    const auto dir = testing::temp_dir("cli");
    CHECK(run_cli("simulate --width 20 --height 20 -R 5 --workers 1 -o " + (dir / "b.asc").string()) == 0);
    CHECK(fs::exists(dir / "b.asc"));
    CHECK(run_cli("optimize --algo random --alpha 0.05 --width 30 --height 30 --final-replications 10 -o " +
                  (dir / "opt").string()) == 0);
    CHECK(run_cli("evaluate --width 30 --height 30 -R 10 --solution " +
                  (dir / "opt" / "solution.csv").string()) == 0);
    CHECK(run_cli("assess-patterns --width 30 --height 30 --alphas 0.05 --trials 1 -R 5") == 0);
    CHECK(run_cli("optimize --algo tabu --alpha 0.05") == 1);
    CHECK(run_cli("optimize --algo random --alpha 0.0001 --width 30 --height 30") == 1);
    CHECK(run_cli("nonsense") == 1);

    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"seeds": []})";
    }
    CHECK(run_cli("compare --config " + (dir / "bad.json").string()) == 1);
    {
        std::ofstream good(dir / "good.json");
        good << R"({"landscape": {"width": 20, "height": 20}, "algorithms": ["random"],
                   "alphas": [0.05], "seeds": [1, 2], "final_replications": 10,
                   "output_dir": "out"})";
    }
    CHECK(run_cli("compare --config " + (dir / "good.json").string()) == 0);
    CHECK(fs::exists(dir / "out" / "burned_random.csv"));
    CHECK(fs::exists(dir / "out" / "timing.csv"));
    fs::remove_all(dir);
}
