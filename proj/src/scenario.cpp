#include "firebreak/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "firebreak/errors.hpp"
#include "firebreak/random.hpp"

namespace firebreak {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

} // namespace

CellRect ignition_bounds(const ScenarioSampler& sampler, const Landscape& landscape) {
    CellRect rect = sampler.ignition_region.value_or(
        CellRect{0, 0, landscape.height(), landscape.width()});
    const int r0 = std::max(rect.row, 0);
    const int c0 = std::max(rect.col, 0);
    const int r1 = std::min(rect.row + rect.height, landscape.height());
    const int c1 = std::min(rect.col + rect.width, landscape.width());
    if (r1 <= r0 || c1 <= c0) {
        throw ConfigError("scenario ignition region lies outside the landscape");
    }
    return CellRect{r0, c0, r1 - r0, c1 - c0};
}

namespace {

bool eligible(const Landscape& landscape, const CellMask& firebreaks, CellIndex j) {
    return landscape.flammable(j) && (firebreaks.cell_count() == 0 || !firebreaks.contains(j));
}

WeatherRecord draw_weather(const ScenarioSampler& sampler, Rng& rng) {
    if (const auto* uniform = std::get_if<UniformCompassWeather>(&sampler.weather)) {
        WeatherRecord w;
        w.wind_direction = kCompassPoints[rng.index(kCompassPoints.size())];
        w.wind_speed = uniform->wind_speed;
        w.temperature = uniform->temperature;
        w.relative_humidity = uniform->relative_humidity;
        return w;
    }
    const auto& records = std::get<EmpiricalWeather>(sampler.weather).records;
    if (records.empty()) {
        throw ConfigError("empirical weather source has no records");
    }
    return records[rng.index(records.size())];
}

} // namespace

std::string_view to_string(ScenarioName name) {
    switch (name) {
    case ScenarioName::M1: return "m1";
    case ScenarioName::M2: return "m2";
    case ScenarioName::M3: return "m3";
    case ScenarioName::Custom: return "custom";
    }
    return "custom";
}

ScenarioName parse_scenario_name(std::string_view token) {
    std::string t(token);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "m1") return ScenarioName::M1;
    if (t == "m2") return ScenarioName::M2;
    if (t == "m3") return ScenarioName::M3;
    if (t == "custom") return ScenarioName::Custom;
    throw ConfigError("unknown scenario '" + std::string(token) + "' (expected m1, m2, m3)");
}

CellRect central_zone(const Landscape& landscape, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("central zone fraction must lie in (0,1]");
    }
    const int w = std::max(1, static_cast<int>(std::lround(landscape.width() * fraction)));
    const int h = std::max(1, static_cast<int>(std::lround(landscape.height() * fraction)));
    return CellRect{(landscape.height() - h) / 2, (landscape.width() - w) / 2, h, w};
}

ScenarioSampler make_m1(const Landscape& landscape, double wind_speed, double central_fraction) {
    ScenarioSampler s;
    s.name = ScenarioName::M1;
    s.ignition_region = central_zone(landscape, central_fraction);
    s.weather = UniformCompassWeather{wind_speed};
    return s;
}

ScenarioSampler make_m2(double wind_speed) {
    ScenarioSampler s;
    s.name = ScenarioName::M2;
    s.weather = UniformCompassWeather{wind_speed};
    return s;
}

ScenarioSampler make_m3(std::vector<WeatherRecord> records) {
    if (records.empty()) {
        throw ConfigError("M3 needs at least one weather record");
    }
    ScenarioSampler s;
    s.name = ScenarioName::M3;
    s.weather = EmpiricalWeather{std::move(records)};
    return s;
}

ScenarioSampler make_fixed_ignition(const Landscape& landscape, CellIndex cell,
                                    WeatherRecord weather) {
    if (!landscape.valid(cell)) {
        throw ConfigError("fixed ignition cell is off the grid");
    }
    ScenarioSampler s;
    s.name = ScenarioName::Custom;
    s.ignition_region = CellRect{landscape.row(cell), landscape.col(cell), 1, 1};
    s.weather = EmpiricalWeather{{weather}};
    return s;
}

ScenarioDraw sample_scenario(const ScenarioSampler& sampler, const Landscape& landscape,
                             const CellMask& firebreaks, std::uint64_t seed) {
    Rng rng(seed);
    ScenarioDraw draw;
    draw.weather = draw_weather(sampler, rng);

    const CellRect region = ignition_bounds(sampler, landscape);
    for (int attempt = 0; attempt < kIgnitionAttempts; ++attempt) {
        const int r = region.row + static_cast<int>(rng.index(region.height));
        const int c = region.col + static_cast<int>(rng.index(region.width));
        const CellIndex j = landscape.index(r, c);
        if (eligible(landscape, firebreaks, j)) {
            draw.ignition_cell = j;
            return draw;
        }
    }

    std::vector<CellIndex> candidates;
    for (int r = region.row; r < region.row + region.height; ++r) {
        for (int c = region.col; c < region.col + region.width; ++c) {
            if (eligible(landscape, firebreaks, landscape.index(r, c))) {
                candidates.push_back(landscape.index(r, c));
            }
        }
    }
    if (candidates.empty()) {
        throw ConfigError("scenario '" + std::string(to_string(sampler.name)) +
                          "' has no flammable, untreated ignition cell");
    }
    draw.ignition_cell = candidates[rng.index(candidates.size())];
    return draw;
}

bool has_eligible_ignition(const ScenarioSampler& sampler, const Landscape& landscape,
                           const CellMask& firebreaks) {
    const CellRect region = ignition_bounds(sampler, landscape);
    for (int r = region.row; r < region.row + region.height; ++r) {
        for (int c = region.col; c < region.col + region.width; ++c) {
            if (eligible(landscape, firebreaks, landscape.index(r, c))) {
                return true;
            }
        }
    }
    return false;
}

std::vector<WeatherRecord> read_weather_file(std::istream& in) {
    std::vector<WeatherRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream row(t);
        std::string field;
        while (std::getline(row, field, ',')) {
            fields.push_back(trim(field));
        }
        if (!header_seen) {
            if (fields != std::vector<std::string>{"wind_speed", "wind_direction", "temperature",
                                                   "relative_humidity"}) {
                throw FormatError("weather file line " + std::to_string(line_no) +
                                  ": expected header "
                                  "wind_speed,wind_direction,temperature,relative_humidity");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw FormatError("weather file line " + std::to_string(line_no) +
                              ": expected 4 fields");
        }
        WeatherRecord w;
        auto number = [&](const std::string& token, double& out) {
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                throw FormatError("weather file line " + std::to_string(line_no) +
                                  ": bad number '" + token + "'");
            }
        };
        number(fields[0], w.wind_speed);
        try {
            w.wind_direction = parse_compass(fields[1]);
        } catch (const FormatError& e) {
            throw FormatError("weather file line " + std::to_string(line_no) + ": " + e.what());
        }
        number(fields[2], w.temperature);
        number(fields[3], w.relative_humidity);
        w.validate();
        records.push_back(w);
    }
    if (!header_seen) {
        throw FormatError("weather file: missing header row");
    }
    if (records.empty()) {
        throw FormatError("weather file: no records");
    }
    return records;
}

std::vector<WeatherRecord> read_weather_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open weather file " + path.string());
    }
    return read_weather_file(in);
}

} // namespace firebreak
