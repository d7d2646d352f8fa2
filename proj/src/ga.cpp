#include <algorithm>
#include <numeric>

#include "firebreak/errors.hpp"
#include "firebreak/optimizers.hpp"
#include "firebreak/parallel.hpp"
#include "search_support.hpp"

namespace firebreak {
namespace {

constexpr std::uint64_t kInitStream = 0x1001;
constexpr std::uint64_t kEvalStream = 0x1002;
constexpr std::uint64_t kBreedStream = 0x1003;
constexpr int kRelocationAttempts = 200;

void check_budget(const FirebreakProblem& problem) {
    if (problem.budget() < problem.shape->size()) {
        throw ConfigError("alpha=" + std::to_string(problem.alpha) +
                          " leaves a budget smaller than one block");
    }
}

} // namespace

void GAConfig::validate() const {
    if (population_size < 4 || population_size % 2 != 0) {
        throw ConfigError("ga: population_size must be an even number >= 4");
    }
    if (eval_replications < 2) {
        throw ConfigError("ga: eval_replications must be >= 2");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw ConfigError("ga: mutation_rate must lie in [0,1]");
    }
    if (!(time_budget >= 0.0)) {
        throw ConfigError("ga: time_budget must be >= 0");
    }
}

Solution crossover(const FirebreakProblem& problem, const Solution& a, const Solution& b,
                   Rng& rng) {
    std::vector<FirebreakBlock> pool;
    std::set_union(a.blocks().begin(), a.blocks().end(), b.blocks().begin(), b.blocks().end(),
                   std::back_inserter(pool));
    rng.shuffle(std::span(pool));
    SolutionBuilder child(problem.landscape, problem.shape, problem.budget());
    for (const FirebreakBlock& block : pool) {
        if (child.remaining() == 0) {
            break;
        }
        child.try_add(block);
    }
    return child.build();
}

Solution mutate(const FirebreakProblem& problem, const Solution& s, std::size_t moves, Rng& rng) {
    SolutionBuilder builder(problem.landscape, s, problem.budget());
    for (std::size_t m = 0; m < moves && !builder.blocks().empty(); ++m) {
        const std::size_t victim = rng.index(builder.blocks().size());
        const FirebreakBlock old = builder.blocks()[victim];
        builder.remove(victim);
        bool placed = false;
        for (int attempt = 0; attempt < kRelocationAttempts && !placed; ++attempt) {
            const auto block = random_block(problem.landscape, *problem.shape, rng);
            placed = block && *block != old && builder.try_add(*block);
        }
        if (!placed) {
            builder.try_add(old);
        }
    }
    return builder.build();
}

SearchResult ga_optimize(const FirebreakProblem& problem, const GAConfig& config,
                         std::uint64_t seed, std::vector<Solution> population) {
    config.validate();
    check_budget(problem);
    detail::Stopwatch clock;
    const Landscape& landscape = problem.landscape;

    if (population.empty()) {
        population.reserve(config.population_size);
        for (std::size_t i = 0; i < config.population_size; ++i) {
            population.push_back(random_solution(landscape, problem.shape, problem.alpha,
                                                 mix_seed(seed, kInitStream, i)));
        }
    } else if (population.size() != config.population_size) {
        throw ConfigError("ga: initial population size differs from population_size");
    }
    for (const Solution& s : population) {
        if (!is_feasible(landscape, s, problem.alpha)) {
            throw ConfigError("ga: initial population contains an infeasible solution");
        }
    }

    SearchResult result{population.front(), std::nullopt, {}, 0};
    Rng rng(mix_seed(seed, kBreedStream));
    const std::size_t half = config.population_size / 2;
    std::vector<detail::Batch> scores(population.size());
    std::vector<std::size_t> order(population.size());

    for (std::size_t generation = 0;; ++generation) {
        if (config.max_generations && generation >= *config.max_generations) {
            break;
        }
        if (clock.elapsed() >= config.time_budget) {
            break;
        }

        // Evaluation: one set of scenario seeds for the whole generation.
        const std::uint64_t eval_seed = config.freeze_evaluation_seeds
                                            ? mix_seed(seed, kEvalStream)
                                            : mix_seed(seed, kEvalStream, generation);
        parallel_for(population.size(), config.workers, [&](std::size_t i) {
            scores[i] = detail::simulate(problem, population[i].mask(landscape),
                                         config.eval_replications, eval_seed, 1, false);
        });

        // Selection: better half survives, ties by position.
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a].estimate.mean_loss < scores[b].estimate.mean_loss;
        });
        const std::size_t leader = order.front();
        const Estimate& lead = scores[leader].estimate;
        if (!result.estimate || lead.mean_loss < result.estimate->mean_loss) {
            result.solution = population[leader];
            result.estimate = lead;
        }
        result.trace.record(clock.elapsed(), lead, landscape.flammable_count(),
                            population[leader].id());
        result.iterations = generation + 1;

        std::vector<Solution> next;
        next.reserve(population.size());
        for (std::size_t k = 0; k < half; ++k) {
            next.push_back(population[order[k]]);
        }

        // Crossover and mutation refill the other half.
        while (next.size() < population.size()) {
            const std::size_t p1 = rng.index(half);
            std::size_t p2 = rng.index(half - 1);
            if (p2 >= p1) {
                ++p2;
            }
            Solution child = crossover(problem, next[p1], next[p2], rng);
            if (rng.bernoulli(config.mutation_rate)) {
                child = mutate(problem, child, config.mutation_moves, rng);
            }
            next.push_back(std::move(child));
        }
        population = std::move(next);
    }
    return result;
}

} // namespace firebreak
