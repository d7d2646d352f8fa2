#include <fstream>

#include "firebreak/errors.hpp"
#include "firebreak/harness.hpp"

namespace firebreak {

PatternReport assess_patterns(const Landscape& landscape, const ScenarioSampler& scenario,
                              const SpreadParams& params, const std::vector<double>& alphas,
                              std::size_t trials, std::size_t replications, std::uint64_t seed,
                              std::shared_ptr<const BlockShape> shape, std::size_t workers) {
    if (trials < 1) {
        throw ConfigError("patterns: trials must be >= 1");
    }
    PatternReport report;
    report.alphas = alphas;
    report.trials = trials;
    report.replications = replications;
    for (PercentTable* table : {&report.cluster, &report.scattered}) {
        table->alphas = alphas;
        for (std::size_t t = 0; t < trials; ++t) {
            table->row_labels.push_back(std::to_string(t + 1));
            table->values.emplace_back(alphas.size());
        }
    }
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double alpha = alphas[a];
        const bool untreated = budget_cells(landscape, alpha) == 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const Solution cluster = untreated ? Solution(shape)
                                               : random_solution(landscape, shape, alpha,
                                                                 mix_seed(seed, 0x3001 + a, t));
            const Solution scattered =
                untreated ? Solution(shape)
                          : scattered_solution(landscape, alpha, mix_seed(seed, 0x3101 + a, t));
            const std::uint64_t eval_seed = mix_seed(seed, 0x3201 + a, t);
            report.cluster.values[t][a] =
                evaluate(landscape, cluster, scenario, params, replications, eval_seed, workers)
                    .percent_burned;
            report.scattered.values[t][a] =
                evaluate(landscape, scattered, scenario, params, replications, eval_seed, workers)
                    .percent_burned;
        }
    }
    return report;
}

void write_pattern_report(const PatternReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream cluster(dir / "patterns_cluster.csv", std::ios::binary);
    report.cluster.write_csv(cluster);
    std::ofstream scattered(dir / "patterns_scattered.csv", std::ios::binary);
    report.scattered.write_csv(scattered);
    if (!cluster || !scattered) {
        throw std::runtime_error("cannot write pattern tables to " + dir.string());
    }
}

} // namespace firebreak
