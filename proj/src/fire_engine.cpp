#include "firebreak/fire_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "firebreak/errors.hpp"
#include "firebreak/parallel.hpp"
#include "firebreak/random.hpp"
#include "firebreak/scenario.hpp"

namespace firebreak {
namespace {

constexpr std::uint64_t kDrawStream = 1;
constexpr std::uint64_t kSpreadStream = 2;

// cos of the angle between two compass points.
double alignment(Compass direction, Compass wind) {
    const int diff = (static_cast<int>(direction) - static_cast<int>(wind) + 8) % 8;
    constexpr double h = std::numbers::sqrt2 / 2.0;
    constexpr std::array<double, 8> cosines{1.0, h, 0.0, -h, -1.0, -h, 0.0, h};
    return cosines[diff];
}

void check_mask(const Landscape& landscape, const CellMask& firebreaks) {
    if (firebreaks.cell_count() != 0 && firebreaks.cell_count() != landscape.cell_count()) {
        throw ValidationError("firebreak mask size does not match the landscape");
    }
}

} // namespace

void WeatherRecord::validate() const {
    if (!(wind_speed >= 0.0)) {
        throw ValidationError("wind_speed must be >= 0");
    }
    if (!(relative_humidity >= 0.0 && relative_humidity <= 100.0)) {
        throw ValidationError("relative_humidity must lie in [0,100]");
    }
}

int SpreadParams::steps_per_fire() const {
    return static_cast<int>(std::ceil(duration_hours * 60.0 / step_minutes - 1e-9));
}

void SpreadParams::validate() const {
    if (!(step_minutes > 0)) {
        throw ConfigError("spread: step_minutes must be > 0");
    }
    if (!(duration_hours > 0)) {
        throw ConfigError("spread: duration_hours must be > 0");
    }
    if (!(wind_aligned_factor >= 1.0)) {
        throw ConfigError("spread: wind_aligned_factor must be >= 1");
    }
    if (!(wind_opposed_factor >= 0.0 && wind_opposed_factor <= 1.0)) {
        throw ConfigError("spread: wind_opposed_factor must lie in [0,1]");
    }
    if (!(wind_cross_factor >= 0.0 && wind_cross_factor <= 1.0)) {
        throw ConfigError("spread: wind_cross_factor must lie in [0,1]");
    }
    if (!(diagonal_attenuation > 0.0 && diagonal_attenuation <= 1.0)) {
        throw ConfigError("spread: diagonal_attenuation must lie in (0,1]");
    }
    if (!(wind_speed_scale > 0)) {
        throw ConfigError("spread: wind_speed_scale must be > 0");
    }
    if (steps_per_fire() < 1) {
        throw ConfigError("spread: fire must last at least one step");
    }
}

double wind_factor(const SpreadParams& params, Compass direction, const WeatherRecord& weather) {
    if (weather.wind_speed <= 0.0) {
        return 1.0;
    }
    const double a = alignment(direction, weather.wind_direction);
    const double raw =
        a >= 0.0 ? params.wind_cross_factor + a * (params.wind_aligned_factor - params.wind_cross_factor)
                 : params.wind_cross_factor - a * (params.wind_opposed_factor - params.wind_cross_factor);
    const double strength = std::min(weather.wind_speed / params.wind_speed_scale, 1.0);
    return 1.0 + strength * (raw - 1.0);
}

double spread_probability(const SpreadParams& params, const FuelModel& fuel, Compass direction,
                          const WeatherRecord& weather) {
    if (!fuel.flammable) {
        return 0.0;
    }
    const double diag = is_diagonal(direction) ? params.diagonal_attenuation : 1.0;
    return std::clamp(fuel.base_spread_prob * wind_factor(params, direction, weather) * diag, 0.0,
                      1.0);
}

double spread_trial(std::uint64_t seed, CellIndex source, CellIndex target) {
    const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(source)) << 32) |
                              static_cast<std::uint32_t>(target);
    return unit_interval(mix_seed(seed, key));
}

FireOutcome run_fire(const Landscape& landscape, const CellMask& firebreaks,
                     const ScenarioDraw& draw, const SpreadParams& params, std::uint64_t seed) {
    check_mask(landscape, firebreaks);
    const CellIndex ignition = draw.ignition_cell;
    const bool has_breaks = firebreaks.cell_count() != 0;
    if (!landscape.valid(ignition)) {
        throw IgnitionRejected("ignition cell " + std::to_string(ignition) + " is off the grid");
    }
    if (!landscape.flammable(ignition) || (has_breaks && firebreaks.contains(ignition))) {
        throw IgnitionRejected("ignition cell " + std::to_string(ignition) +
                               " is non-flammable or a firebreak");
    }

    // Wind and diagonal multipliers per direction; the target's fuel supplies the base.
    std::array<double, 8> direction_factor{};
    for (Compass d : kCompassPoints) {
        direction_factor[static_cast<std::size_t>(d)] =
            wind_factor(params, d, draw.weather) * (is_diagonal(d) ? params.diagonal_attenuation : 1.0);
    }

    const int width = landscape.width();
    const int height = landscape.height();
    std::vector<std::uint8_t> burning(landscape.cell_count(), 0);
    std::vector<CellIndex> burned{ignition};
    std::vector<CellIndex> frontier{ignition};
    std::vector<CellIndex> next;
    burning[ignition] = 1;

    const int steps = params.steps_per_fire();
    for (int step = 1; step <= steps && !frontier.empty(); ++step) {
        next.clear();
        for (CellIndex source : frontier) {
            const int r = source / width;
            const int c = source % width;
            for (Compass d : kCompassPoints) {
                const GridStep s = grid_step(d);
                const int nr = r + s.drow;
                const int nc = c + s.dcol;
                if (nr < 0 || nr >= height || nc < 0 || nc >= width) {
                    continue;
                }
                const CellIndex target = nr * width + nc;
                if (burning[target] || !landscape.flammable(target) ||
                    (has_breaks && firebreaks.contains(target))) {
                    continue;
                }
                const double p = std::clamp(
                    landscape.base_spread_prob(target) * direction_factor[static_cast<std::size_t>(d)],
                    0.0, 1.0);
                if (p > 0.0 && spread_trial(seed, source, target) < p) {
                    burning[target] = 1;
                    next.push_back(target);
                    burned.push_back(target);
                }
            }
        }
        frontier.swap(next);
    }

    std::sort(burned.begin(), burned.end());
    FireOutcome outcome;
    outcome.loss = burned.size();
    outcome.burned = std::move(burned);
    return outcome;
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t r) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(r));
}

std::uint64_t draw_seed(std::uint64_t replication_seed) {
    return mix_seed(replication_seed, kDrawStream);
}

std::uint64_t spread_seed(std::uint64_t replication_seed) {
    return mix_seed(replication_seed, kSpreadStream);
}

std::vector<FireOutcome> run_replications(const Landscape& landscape, const CellMask& firebreaks,
                                          const ScenarioSampler& scenario,
                                          const SpreadParams& params, std::size_t replications,
                                          std::uint64_t master_seed, std::size_t workers) {
    if (replications < 1) {
        throw ConfigError("replication count must be >= 1");
    }
    check_mask(landscape, firebreaks);
    std::vector<FireOutcome> outcomes(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
        const std::uint64_t seed = replication_seed(master_seed, r);
        const ScenarioDraw draw = sample_scenario(scenario, landscape, firebreaks, draw_seed(seed));
        outcomes[r] = run_fire(landscape, firebreaks, draw, params, spread_seed(seed));
    });
    return outcomes;
}

std::vector<FireOutcome> run_replications(const Landscape& landscape, const CellMask& firebreaks,
                                          std::span<const ScenarioDraw> draws,
                                          const SpreadParams& params, std::uint64_t master_seed,
                                          std::size_t workers) {
    if (draws.empty()) {
        throw ConfigError("replication count must be >= 1");
    }
    check_mask(landscape, firebreaks);
    std::vector<FireOutcome> outcomes(draws.size());
    parallel_for(draws.size(), workers, [&](std::size_t r) {
        const std::uint64_t seed = replication_seed(master_seed, r);
        outcomes[r] = run_fire(landscape, firebreaks, draws[r], params, spread_seed(seed));
    });
    return outcomes;
}

std::vector<std::uint32_t> burn_counts(std::span<const FireOutcome> outcomes,
                                       std::size_t cell_count) {
    std::vector<std::uint32_t> counts(cell_count, 0);
    for (const FireOutcome& o : outcomes) {
        for (CellIndex j : o.burned) {
            ++counts[j];
        }
    }
    return counts;
}

} // namespace firebreak
