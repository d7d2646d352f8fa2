#include <algorithm>

#include "firebreak/errors.hpp"
#include "firebreak/optimizers.hpp"
#include "search_support.hpp"

namespace firebreak {
namespace {

constexpr std::uint64_t kRestartStream = 0x2001;
constexpr std::uint64_t kConstructStream = 0x2002;
constexpr std::uint64_t kLocalStream = 0x2003;

struct Candidate {
    std::uint64_t score;
    std::size_t index;  // catalog index, or local enumeration order
    FirebreakBlock block;
};

// Top `size` candidates by descending score, ties to the lower index.
void restrict_to_rcl(std::vector<Candidate>& candidates, std::size_t size) {
    auto better = [](const Candidate& a, const Candidate& b) {
        return a.score != b.score ? a.score > b.score : a.index < b.index;
    };
    const std::size_t keep = std::min(size, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), better);
    candidates.resize(keep);
}

std::uint64_t frequency_score(std::span<const CellIndex> cells,
                              const std::vector<std::uint32_t>& counts) {
    std::uint64_t s = 0;
    for (CellIndex j : cells) {
        s += counts[j];
    }
    return s;
}

// Construction: add blocks drawn from the RCL of burn-frequency scores until
// nothing fits.
SolutionBuilder construct(const FirebreakProblem& problem, const GRASPConfig& config,
                          const PlacementCatalog& catalog, std::uint64_t seed, Rng& rng) {
    const Landscape& landscape = problem.landscape;
    SolutionBuilder builder(landscape, problem.shape, problem.budget());
    std::vector<Candidate> candidates;
    for (std::size_t step = 0; builder.remaining() > 0; ++step) {
        const CellMask treated = detail::builder_mask(landscape, builder);
        const auto batch = detail::simulate(problem, treated, config.construction_samples,
                                            mix_seed(seed, kConstructStream, step), config.workers,
                                            true);
        const detail::IgnitionGuard guard(landscape, problem.scenario, builder);
        candidates.clear();
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            const auto cells = catalog.cells(i);
            std::size_t added = 0;
            for (CellIndex j : cells) {
                added += !treated.contains(j);
            }
            if (added == 0 || added > builder.remaining() || !guard.allows(cells)) {
                continue;
            }
            candidates.push_back({frequency_score(cells, batch.counts), i, catalog.block(i)});
        }
        if (candidates.empty()) {
            break;
        }
        restrict_to_rcl(candidates, config.rcl_size);
        builder.try_add(candidates[rng.index(candidates.size())].block);
    }
    return builder;
}

} // namespace

void GRASPConfig::validate() const {
    if (rcl_size < 1) {
        throw ConfigError("grasp: rcl_size must be >= 1");
    }
    if (construction_samples < 2) {
        throw ConfigError("grasp: construction_samples must be >= 2");
    }
    if (!(time_budget >= 0.0)) {
        throw ConfigError("grasp: time_budget must be >= 0");
    }
    if (local_search_radius < 0) {
        throw ConfigError("grasp: local_search_radius must be >= 0");
    }
}

SearchResult grasp_optimize(const FirebreakProblem& problem, const GRASPConfig& config,
                            std::uint64_t seed) {
    config.validate();
    const Landscape& landscape = problem.landscape;
    if (problem.budget() < problem.shape->size()) {
        throw ConfigError("alpha=" + std::to_string(problem.alpha) +
                          " leaves a budget smaller than one block");
    }
    detail::Stopwatch clock;
    const PlacementCatalog catalog(landscape, *problem.shape);
    if (catalog.size() == 0) {
        throw ConfigError("grasp: the block shape fits nowhere on the landscape");
    }

    std::optional<SearchResult> best;
    for (std::size_t restart = 0;; ++restart) {
        if (restart > 0 && ((config.max_restarts && restart >= *config.max_restarts) ||
                            clock.elapsed() >= config.time_budget)) {
            break;
        }
        const std::uint64_t restart_seed = mix_seed(seed, kRestartStream, restart);
        Rng rng(restart_seed);
        SolutionBuilder current = construct(problem, config, catalog, restart_seed, rng);
        if (!best && clock.elapsed() >= config.time_budget) {
            return SearchResult{current.build(), std::nullopt, {}, 1};
        }

        // Local search: relocate one block within the Chebyshev radius, choosing the
        // target from the RCL of burn-frequency scores; keep it if the estimate drops.
        // Every layout in this restart is scored on the same replication seeds.
        const std::uint64_t ls_seed = mix_seed(restart_seed, kLocalStream);
        auto incumbent = detail::simulate(problem, detail::builder_mask(landscape, current),
                                          config.construction_samples, ls_seed, config.workers,
                                          true);
        std::vector<Candidate> candidates;
        std::vector<CellIndex> cells;
        for (std::size_t it = 0; it < config.local_search_iterations; ++it) {
            if (current.blocks().empty() || clock.elapsed() >= config.time_budget) {
                break;
            }
            const std::size_t victim = rng.index(current.blocks().size());
            const FirebreakBlock old = current.blocks()[victim];
            SolutionBuilder trial = current;
            trial.remove(victim);

            const detail::IgnitionGuard guard(landscape, problem.scenario, trial);
            candidates.clear();
            const int r0 = landscape.row(old.anchor);
            const int c0 = landscape.col(old.anchor);
            const int radius = config.local_search_radius;
            std::size_t order = 0;
            for (int r = r0 - radius; r <= r0 + radius; ++r) {
                for (int c = c0 - radius; c <= c0 + radius; ++c) {
                    if (!landscape.contains(r, c)) {
                        continue;
                    }
                    for (Orientation o : kOrientations) {
                        const FirebreakBlock block{landscape.index(r, c), o};
                        ++order;
                        if (block == old || trial.contains(block) ||
                            !try_realize_block(landscape, *problem.shape, block, cells)) {
                            continue;
                        }
                        std::size_t added = 0;
                        for (CellIndex j : cells) {
                            added += !trial.covers(j);
                        }
                        if (added == 0 || added > trial.remaining() || !guard.allows(cells)) {
                            continue;
                        }
                        candidates.push_back(
                            {frequency_score(cells, incumbent.counts), order, block});
                    }
                }
            }
            if (candidates.empty()) {
                continue;
            }
            restrict_to_rcl(candidates, config.rcl_size);
            trial.try_add(candidates[rng.index(candidates.size())].block);

            auto scored = detail::simulate(problem, detail::builder_mask(landscape, trial),
                                           config.construction_samples, ls_seed, config.workers,
                                           true);
            if (scored.estimate.mean_loss < incumbent.estimate.mean_loss) {
                current = std::move(trial);
                incumbent = std::move(scored);
            }
        }

        // Global update.
        if (!best || !best->estimate ||
            incumbent.estimate.mean_loss < best->estimate->mean_loss) {
            Solution solution = current.build();
            if (!best) {
                best = SearchResult{solution, std::nullopt, {}, 0};
            }
            best->solution = std::move(solution);
            best->estimate = incumbent.estimate;
            best->trace.record(clock.elapsed(), incumbent.estimate, landscape.flammable_count(),
                               best->solution.id());
        }
        best->iterations = restart + 1;
    }
    return std::move(*best);
}

} // namespace firebreak
