#include <stdexcept>

#include "firebreak/errors.hpp"
#include "firebreak/optimizers.hpp"
#include "search_support.hpp"

namespace firebreak {

Solution greedy_from_frequency(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                               std::span<const double> weights, std::size_t budget,
                               const ScenarioSampler* scenario) {
    if (weights.size() != landscape.cell_count()) {
        throw std::invalid_argument("greedy: weight map does not match the landscape");
    }
    const PlacementCatalog catalog(landscape, *shape);
    SolutionBuilder builder(landscape, shape, budget);
    std::vector<char> dead(catalog.size(), 0);
    while (builder.remaining() > 0) {
        std::optional<detail::IgnitionGuard> guard;
        if (scenario) {
            guard.emplace(landscape, *scenario, builder);
        }
        std::optional<std::size_t> pick;
        double best = 0.0;
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            if (dead[i]) {
                continue;
            }
            const auto cells = catalog.cells(i);
            std::size_t added = 0;
            double gain = 0.0;
            for (CellIndex j : cells) {
                if (!builder.covers(j)) {
                    ++added;
                    gain += weights[j];
                }
            }
            // Placements only lose room as the solution grows, so these never return.
            if (added == 0 || added > builder.remaining()) {
                dead[i] = 1;
                continue;
            }
            if (guard && !guard->allows(cells)) {
                continue;
            }
            if (!pick || gain > best) {
                pick = i;
                best = gain;
            }
        }
        if (!pick) {
            break;
        }
        builder.try_add(catalog.block(*pick));
        dead[*pick] = 1;
    }
    return builder.build();
}

Solution greedy_baseline(const FirebreakProblem& problem, std::size_t replications,
                         std::uint64_t seed, std::size_t workers) {
    if (problem.budget() < problem.shape->size()) {
        throw ConfigError("alpha=" + std::to_string(problem.alpha) +
                          " leaves a budget smaller than one block");
    }
    const CellMask none(problem.landscape.cell_count());
    const auto batch = detail::simulate(problem, none, replications, seed, workers, true);
    const std::vector<double> weights(batch.counts.begin(), batch.counts.end());
    return greedy_from_frequency(problem.landscape, problem.shape, weights, problem.budget(),
                                 &problem.scenario);
}

Solution random_baseline(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                         double alpha, std::uint64_t seed) {
    return random_solution(landscape, std::move(shape), alpha, seed);
}

} // namespace firebreak
