#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <vector>

#include "firebreak/optimizers.hpp"

namespace firebreak::detail {

class Stopwatch {
public:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Batch {
    Estimate estimate;
    std::vector<std::uint32_t> counts;  // filled when requested
};

// Replications on a treated-cell mask. A mask that leaves no ignition cell
// scores +infinity so that searches discard it.
inline Batch simulate(const FirebreakProblem& problem, const CellMask& treated,
                      std::size_t replications, std::uint64_t seed, std::size_t workers,
                      bool with_counts) {
    Batch batch;
    if (!has_eligible_ignition(problem.scenario, problem.landscape, treated)) {
        batch.estimate.mean_loss = std::numeric_limits<double>::infinity();
        batch.estimate.percent_burned = std::numeric_limits<double>::infinity();
        batch.estimate.replications = replications;
        if (with_counts) {
            batch.counts.assign(problem.landscape.cell_count(), 0);
        }
        return batch;
    }
    const auto outcomes = run_replications(problem.landscape, treated, problem.scenario,
                                           problem.params, replications, seed, workers);
    batch.estimate = estimate_from_outcomes(outcomes, problem.landscape.flammable_count());
    if (with_counts) {
        batch.counts = burn_counts(outcomes, problem.landscape.cell_count());
    }
    return batch;
}

inline CellMask builder_mask(const Landscape& landscape, const SolutionBuilder& builder) {
    CellMask mask(landscape.cell_count());
    for (std::size_t j = 0; j < landscape.cell_count(); ++j) {
        if (builder.covers(static_cast<CellIndex>(j))) {
            mask.insert(static_cast<CellIndex>(j));
        }
    }
    return mask;
}

// Counts eligible ignition cells left in the scenario region, so that
// candidate blocks that would leave none can be rejected.
class IgnitionGuard {
public:
    IgnitionGuard(const Landscape& landscape, const ScenarioSampler& scenario,
                  const SolutionBuilder& builder)
        : landscape_(landscape), region_(ignition_bounds(scenario, landscape)), builder_(builder) {
        for (int r = region_.row; r < region_.row + region_.height; ++r) {
            for (int c = region_.col; c < region_.col + region_.width; ++c) {
                const CellIndex j = landscape.index(r, c);
                eligible_ += landscape.flammable(j) && !builder.covers(j);
            }
        }
    }

    bool allows(std::span<const CellIndex> cells) const {
        std::size_t removed = 0;
        for (CellIndex j : cells) {
            removed += region_.contains(landscape_.row(j), landscape_.col(j)) &&
                       !builder_.covers(j);
        }
        return removed < eligible_;
    }

private:
    const Landscape& landscape_;
    CellRect region_;
    const SolutionBuilder& builder_;
    std::size_t eligible_ = 0;
};

} // namespace firebreak::detail
