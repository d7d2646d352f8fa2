#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "firebreak/landscape.hpp"

namespace firebreak {

// Constant weather for the whole fire. wind_direction is the direction the
// wind blows toward, i.e. the downwind direction. Temperature and humidity
// are carried for weather-file fidelity; the spread model treats them as
// neutral.
struct WeatherRecord {
    Compass wind_direction = Compass::N;
    double wind_speed = 0.0;  // km/h
    double temperature = 20.0;  // degrees C
    double relative_humidity = 40.0;  // percent

    void validate() const;
    bool operator==(const WeatherRecord&) const = default;
};

struct ScenarioDraw {
    CellIndex ignition_cell = 0;
    WeatherRecord weather;

    bool operator==(const ScenarioDraw&) const = default;
};

// Parameters of the stochastic cellular-automaton surrogate.
struct SpreadParams {
    double step_minutes = 30.0;
    double duration_hours = 30.0;
    double wind_aligned_factor = 2.5;
    double wind_opposed_factor = 0.2;
    double wind_cross_factor = 0.6;
    double diagonal_attenuation = 0.7;
    double wind_speed_scale = 30.0;  // km/h at which wind reaches full effect

    int steps_per_fire() const;
    void validate() const;  // throws ConfigError
};

struct FireOutcome {
    std::vector<CellIndex> burned;  // sorted ascending
    std::size_t loss = 0;           // == burned.size()

    bool operator==(const FireOutcome&) const = default;
};

// Wind multiplier for spread toward `direction`, before diagonal attenuation.
// Interpolates piecewise-linearly in cos(angle to the downwind direction):
// 1 -> aligned, 0 -> cross, -1 -> opposed; then shrinks toward 1 by
// min(wind_speed / wind_speed_scale, 1).
double wind_factor(const SpreadParams& params, Compass direction, const WeatherRecord& weather);

double spread_probability(const SpreadParams& params, const FuelModel& fuel, Compass direction,
                          const WeatherRecord& weather);

// Uniform variate for the spread trial source -> target in one replication.
// Keyed on the pair so that trials coincide across firebreak layouts.
double spread_trial(std::uint64_t seed, CellIndex source, CellIndex target);

// Synchronous CA: cells ignited at step t try each unburned, flammable,
// non-firebreak neighbor once at step t+1. Throws IgnitionRejected if the
// ignition cell cannot burn.
FireOutcome run_fire(const Landscape& landscape, const CellMask& firebreaks,
                     const ScenarioDraw& draw, const SpreadParams& params, std::uint64_t seed);

// Per-replication seed. Replication r's draw and spread streams derive from it.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t r);
std::uint64_t draw_seed(std::uint64_t replication_seed);
std::uint64_t spread_seed(std::uint64_t replication_seed);

struct ScenarioSampler;

// R i.i.d. replications; replication r draws its own scenario from
// replication_seed(master_seed, r). Output order is by r regardless of
// worker count.
std::vector<FireOutcome> run_replications(const Landscape& landscape, const CellMask& firebreaks,
                                          const ScenarioSampler& scenario,
                                          const SpreadParams& params, std::size_t replications,
                                          std::uint64_t master_seed, std::size_t workers = 1);

// Same, with the scenario draws fixed by the caller (draws[r] for replication r).
// Used to compare firebreak layouts under identical ignitions and weather.
std::vector<FireOutcome> run_replications(const Landscape& landscape, const CellMask& firebreaks,
                                          std::span<const ScenarioDraw> draws,
                                          const SpreadParams& params, std::uint64_t master_seed,
                                          std::size_t workers = 1);

// Number of outcomes in which each cell burned.
std::vector<std::uint32_t> burn_counts(std::span<const FireOutcome> outcomes,
                                       std::size_t cell_count);

} // namespace firebreak
