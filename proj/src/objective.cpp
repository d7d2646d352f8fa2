#include "firebreak/objective.hpp"

#include <cmath>
#include <numeric>

#include "firebreak/errors.hpp"

namespace firebreak {

std::optional<double> Estimate::std_err_percent(std::size_t flammable_cells) const {
    if (!std_err || flammable_cells == 0) {
        return std::nullopt;
    }
    return *std_err / static_cast<double>(flammable_cells) * 100.0;
}

Estimate estimate_from_losses(std::span<const double> losses, std::size_t flammable_cells) {
    if (losses.empty()) {
        throw ConfigError("an estimate needs at least one replication");
    }
    Estimate e;
    e.replications = losses.size();
    const double n = static_cast<double>(losses.size());
    e.mean_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / n;
    if (losses.size() > 1) {
        double ss = 0.0;
        for (double x : losses) {
            ss += (x - e.mean_loss) * (x - e.mean_loss);
        }
        e.std_err = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    e.percent_burned =
        flammable_cells ? e.mean_loss / static_cast<double>(flammable_cells) * 100.0 : 0.0;
    return e;
}

Estimate estimate_from_outcomes(std::span<const FireOutcome> outcomes,
                                std::size_t flammable_cells) {
    std::vector<double> losses;
    losses.reserve(outcomes.size());
    for (const FireOutcome& o : outcomes) {
        losses.push_back(static_cast<double>(o.loss));
    }
    return estimate_from_losses(losses, flammable_cells);
}

double treatment_cost(const Solution& solution, std::span<const double> cell_values) {
    if (cell_values.empty()) {
        return static_cast<double>(solution.treated_count());
    }
    double cost = 0.0;
    for (CellIndex j : solution.cells()) {
        cost += cell_values[static_cast<std::size_t>(j)];
    }
    return cost;
}

LossEstimate with_treatment_cost(const Landscape& landscape, const Estimate& estimate,
                                 const Solution& solution, std::span<const double> cell_values) {
    if (!cell_values.empty() && cell_values.size() != landscape.cell_count()) {
        throw ValidationError("cell value raster size does not match the landscape");
    }
    LossEstimate out;
    out.estimate = estimate;
    out.treatment_cost = treatment_cost(solution, cell_values);
    out.total = estimate.mean_loss + out.treatment_cost;
    const auto flammable = static_cast<double>(landscape.flammable_count());
    out.total_percent = flammable > 0 ? out.total / flammable * 100.0 : 0.0;
    return out;
}

Estimate evaluate(const Landscape& landscape, const Solution& solution,
                  const ScenarioSampler& scenario, const SpreadParams& params,
                  std::size_t replications, std::uint64_t master_seed, std::size_t workers) {
    if (replications < 2) {
        throw ConfigError("evaluate needs at least 2 replications");
    }
    const auto outcomes = run_replications(landscape, solution.mask(landscape), scenario, params,
                                           replications, master_seed, workers);
    return estimate_from_outcomes(outcomes, landscape.flammable_count());
}

LossEstimate evaluate_with_cost(const Landscape& landscape, const Solution& solution,
                                const ScenarioSampler& scenario, const SpreadParams& params,
                                std::size_t replications, std::uint64_t master_seed,
                                std::size_t workers, std::span<const double> cell_values) {
    const Estimate e =
        evaluate(landscape, solution, scenario, params, replications, master_seed, workers);
    return with_treatment_cost(landscape, e, solution, cell_values);
}

} // namespace firebreak
