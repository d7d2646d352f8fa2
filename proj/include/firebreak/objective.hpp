#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "firebreak/fire_engine.hpp"
#include "firebreak/landscape.hpp"
#include "firebreak/placement.hpp"
#include "firebreak/scenario.hpp"

namespace firebreak {

// Sample-average estimate of the expected burned-cell count.
struct Estimate {
    double mean_loss = 0.0;          // cells
    std::optional<double> std_err;   // cells; absent when R == 1
    std::size_t replications = 0;
    double percent_burned = 0.0;     // mean_loss / flammable cells * 100

    std::optional<double> std_err_percent(std::size_t flammable_cells) const;
};

// Loss plus the value destroyed by the treatment itself.
struct LossEstimate {
    Estimate estimate;
    double treatment_cost = 0.0;  // cells
    double total = 0.0;           // estimate.mean_loss + treatment_cost
    double total_percent = 0.0;   // total / flammable cells * 100
};

// Mean and standard error (sample std / sqrt(R)) of a batch of losses.
Estimate estimate_from_losses(std::span<const double> losses, std::size_t flammable_cells);
Estimate estimate_from_outcomes(std::span<const FireOutcome> outcomes,
                                std::size_t flammable_cells);

// Treated-cell cost, optionally weighted by a per-cell value raster
// (empty: every cell is worth 1).
double treatment_cost(const Solution& solution, std::span<const double> cell_values = {});

LossEstimate with_treatment_cost(const Landscape& landscape, const Estimate& estimate,
                                 const Solution& solution,
                                 std::span<const double> cell_values = {});

// Runs R >= 2 replications on the solution's treated cells.
Estimate evaluate(const Landscape& landscape, const Solution& solution,
                  const ScenarioSampler& scenario, const SpreadParams& params,
                  std::size_t replications, std::uint64_t master_seed, std::size_t workers = 1);

LossEstimate evaluate_with_cost(const Landscape& landscape, const Solution& solution,
                                const ScenarioSampler& scenario, const SpreadParams& params,
                                std::size_t replications, std::uint64_t master_seed,
                                std::size_t workers = 1,
                                std::span<const double> cell_values = {});

} // namespace firebreak
