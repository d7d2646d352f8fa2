#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "firebreak/fire_engine.hpp"
#include "firebreak/landscape.hpp"

namespace firebreak {

enum class ScenarioName { M1, M2, M3, Custom };

std::string_view to_string(ScenarioName name);
ScenarioName parse_scenario_name(std::string_view token);  // m1|m2|m3|custom

struct CellRect {
    int row = 0;
    int col = 0;
    int height = 1;
    int width = 1;

    bool contains(int r, int c) const {
        return r >= row && r < row + height && c >= col && c < col + width;
    }
    bool operator==(const CellRect&) const = default;
};

// Wind direction uniform over the eight compass points at a fixed speed.
struct UniformCompassWeather {
    double wind_speed = 20.0;
    double temperature = 20.0;
    double relative_humidity = 40.0;
};

// Rows of a weather file, sampled uniformly.
struct EmpiricalWeather {
    std::vector<WeatherRecord> records;
};

struct ScenarioSampler {
    ScenarioName name = ScenarioName::M2;
    std::optional<CellRect> ignition_region;  // empty: anywhere
    std::variant<UniformCompassWeather, EmpiricalWeather> weather = UniformCompassWeather{};
};

inline constexpr double kDefaultCentralFraction = 1.0 / 3.0;
inline constexpr int kIgnitionAttempts = 1000;

// Centered rectangle covering `fraction` of the width and of the height.
CellRect central_zone(const Landscape& landscape, double fraction = kDefaultCentralFraction);

ScenarioSampler make_m1(const Landscape& landscape, double wind_speed = 20.0,
                        double central_fraction = kDefaultCentralFraction);
ScenarioSampler make_m2(double wind_speed = 20.0);
ScenarioSampler make_m3(std::vector<WeatherRecord> records);
// Ignition pinned to one cell.
ScenarioSampler make_fixed_ignition(const Landscape& landscape, CellIndex cell,
                                    WeatherRecord weather = {});

// Ignition uniform over the region's flammable, non-firebreak cells, by
// rejection from a seed-determined candidate stream (so layouts that share a
// seed share the draw whenever the first eligible candidate coincides).
// After kIgnitionAttempts rejections the eligible cells are enumerated;
// an empty set throws ConfigError.
ScenarioDraw sample_scenario(const ScenarioSampler& sampler, const Landscape& landscape,
                             const CellMask& firebreaks, std::uint64_t seed);

// Ignition region clipped to the grid (whole grid when unrestricted).
CellRect ignition_bounds(const ScenarioSampler& sampler, const Landscape& landscape);

// True if at least one eligible ignition cell remains under `firebreaks`.
bool has_eligible_ignition(const ScenarioSampler& sampler, const Landscape& landscape,
                           const CellMask& firebreaks);

// Header `wind_speed,wind_direction,temperature,relative_humidity`.
std::vector<WeatherRecord> read_weather_file(std::istream& in);
std::vector<WeatherRecord> read_weather_file(const std::filesystem::path& path);

} // namespace firebreak
