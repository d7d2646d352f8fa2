#include <doctest.h>

#include <sstream>

#include "firebreak/errors.hpp"
#include "firebreak/scenario.hpp"
#include "helpers.hpp"

using namespace firebreak;

namespace {

double chi_square(const std::vector<double>& observed, double expected) {
    double chi = 0.0;
    for (double o : observed) {
        chi += (o - expected) * (o - expected) / expected;
    }
    return chi;
}

} // namespace

TEST_CASE("central zone is the centred third") {
    const Landscape l = synthetic_landscape(100, 100, 0.3);
    const CellRect z = central_zone(l);
    CHECK(z == CellRect{33, 33, 33, 33});
    const CellRect whole = central_zone(l, 1.0);
    CHECK(whole == CellRect{0, 0, 100, 100});
    const CellRect tiny = central_zone(synthetic_landscape(2, 2, 0.3), 0.01);
    CHECK(tiny.width == 1);
    CHECK(tiny.height == 1);
}

TEST_CASE("M1 ignitions stay inside the central zone") {
    const Landscape l = synthetic_landscape(100, 100, 0.3);
    const ScenarioSampler m1 = make_m1(l);
    const CellRect z = central_zone(l);
    for (std::uint64_t s = 0; s < 5000; ++s) {
        const ScenarioDraw d = sample_scenario(m1, l, CellMask(), s);
        CHECK(z.contains(l.row(d.ignition_cell), l.col(d.ignition_cell)));
        CHECK(d.weather.wind_speed == 20.0);
    }
}

TEST_CASE("M2 ignitions and wind directions are uniform") {
    const Landscape l = synthetic_landscape(100, 100, 0.3);
    const ScenarioSampler m2 = make_m2();
    std::vector<double> blocks(100, 0.0);
    std::vector<double> winds(8, 0.0);
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const ScenarioDraw d = sample_scenario(m2, l, CellMask(), mix_seed(s, 17));
        blocks[static_cast<std::size_t>(l.row(d.ignition_cell) / 10 * 10 + l.col(d.ignition_cell) / 10)] += 1;
        winds[static_cast<std::size_t>(d.weather.wind_direction)] += 1;
    }
    // 0.999 quantiles of chi-square with 99 and 7 degrees of freedom.
    CHECK(chi_square(blocks, 100.0) < 148.23);
    CHECK(chi_square(winds, 1250.0) < 24.32);
}

TEST_CASE("ignitions avoid firebreaks and non-fuel") {
    FuelTable t;
    t.emplace(1, FuelModel{1, "grass", true, 0.5});
    t.emplace(2, FuelModel{2, "rock", false, 0.0});
    std::vector<int> codes(100, 2);
    codes[42] = 1;
    codes[43] = 1;
    const Landscape l(10, 10, 1.0, codes, t);
    const std::vector<CellIndex> breaks{43};
    const CellMask mask = CellMask::from_cells(100, breaks);
    for (std::uint64_t s = 0; s < 50; ++s) {
        CHECK(sample_scenario(make_m2(), l, mask, s).ignition_cell == 42);
    }
    CHECK(has_eligible_ignition(make_m2(), l, mask));
    const std::vector<CellIndex> both{42, 43};
    const CellMask full = CellMask::from_cells(100, both);
    CHECK_FALSE(has_eligible_ignition(make_m2(), l, full));
    CHECK_THROWS_AS(sample_scenario(make_m2(), l, full, 1), ConfigError);
}

TEST_CASE("M3 draws weather records from the file") {
    std::istringstream one("wind_speed,wind_direction,temperature,relative_humidity\n"
                           "14.5,SW,28,22\n");
    const auto records = read_weather_file(one);
    REQUIRE(records.size() == 1);
    CHECK(records[0].wind_direction == Compass::SW);
    const Landscape l = synthetic_landscape(20, 20, 0.3);
    const ScenarioSampler m3 = make_m3(records);
    for (std::uint64_t s = 0; s < 100; ++s) {
        CHECK(sample_scenario(m3, l, CellMask(), s).weather == records[0]);
    }

    std::istringstream two("wind_speed,wind_direction,temperature,relative_humidity\n"
                           "10,N,20,30\n30,E,25,15\n");
    const ScenarioSampler both = make_m3(read_weather_file(two));
    std::size_t east = 0;
    for (std::uint64_t s = 0; s < 2000; ++s) {
        east += sample_scenario(both, l, CellMask(), s).weather.wind_direction == Compass::E;
    }
    CHECK(east > 900);
    CHECK(east < 1100);
}

TEST_CASE("weather file errors") {
    std::istringstream header("speed,dir\n1,N\n");
    CHECK_THROWS(read_weather_file(header));
    std::istringstream humidity("wind_speed,wind_direction,temperature,relative_humidity\n"
                                "10,N,20,130\n");
    CHECK_THROWS(read_weather_file(humidity));
    std::istringstream empty("wind_speed,wind_direction,temperature,relative_humidity\n");
    CHECK_THROWS(make_m3(read_weather_file(empty)));
}

TEST_CASE("sampling is deterministic and fixed ignitions are honoured") {
    const Landscape l = synthetic_landscape(30, 30, 0.3);
    const ScenarioSampler m2 = make_m2();
    CHECK(sample_scenario(m2, l, CellMask(), 5) == sample_scenario(m2, l, CellMask(), 5));
    const ScenarioSampler fixed = make_fixed_ignition(l, 123, {Compass::W, 12.0});
    const ScenarioDraw d = sample_scenario(fixed, l, CellMask(), 8);
    CHECK(d.ignition_cell == 123);
    CHECK(d.weather.wind_direction == Compass::W);
}

TEST_CASE("scenario names") {
    CHECK(parse_scenario_name("m1") == ScenarioName::M1);
    CHECK(parse_scenario_name("M3") == ScenarioName::M3);
    CHECK(to_string(ScenarioName::M2) == "m2");
    CHECK_THROWS(parse_scenario_name("m4"));
}
