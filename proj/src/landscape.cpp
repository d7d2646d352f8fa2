#include "firebreak/landscape.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "firebreak/errors.hpp"

namespace firebreak {
namespace {

constexpr std::array<GridStep, 8> kSteps{{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}}};

constexpr std::array<std::string_view, 8> kCompassNames{"N", "NE", "E", "SE",
                                                         "S", "SW", "W", "NW"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

bool parse_bool(const std::string& token, bool& out) {
    std::string t = token;
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "true" || t == "1" || t == "yes") {
        out = true;
        return true;
    }
    if (t == "false" || t == "0" || t == "no") {
        out = false;
        return true;
    }
    return false;
}

template <typename T>
bool parse_value(const std::string& token, T& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

FuelModel nodata_fuel() {
    return FuelModel{kNoDataFuelCode, "nodata", false, 0.0};
}

} // namespace

std::string_view to_string(Compass direction) {
    return kCompassNames[static_cast<std::size_t>(direction)];
}

Compass parse_compass(std::string_view token) {
    std::string upper(token);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (std::size_t i = 0; i < kCompassNames.size(); ++i) {
        if (upper == kCompassNames[i]) {
            return kCompassPoints[i];
        }
    }
    throw FormatError("unknown compass direction '" + std::string(token) + "'");
}

Compass opposite(Compass direction) {
    return kCompassPoints[(static_cast<std::size_t>(direction) + 4) % 8];
}

bool is_diagonal(Compass direction) {
    return static_cast<std::size_t>(direction) % 2 == 1;
}

GridStep grid_step(Compass direction) {
    return kSteps[static_cast<std::size_t>(direction)];
}

void FuelModel::validate() const {
    if (!(base_spread_prob >= 0.0 && base_spread_prob <= 1.0)) {
        throw ValidationError("fuel " + std::to_string(code) +
                              ": base_spread_prob must lie in [0,1]");
    }
    if (!flammable && base_spread_prob != 0.0) {
        throw ValidationError("fuel " + std::to_string(code) +
                              ": non-flammable fuel must have base_spread_prob 0");
    }
}

Landscape::Landscape(int width, int height, double cell_size, std::vector<int> fuel_codes,
                     FuelTable fuel_table, double xllcorner, double yllcorner)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      xllcorner_(xllcorner),
      yllcorner_(yllcorner),
      fuel_codes_(std::move(fuel_codes)),
      fuel_table_(std::move(fuel_table)) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("landscape dimensions must be positive");
    }
    if (!(cell_size > 0)) {
        throw ValidationError("cell size must be positive");
    }
    if (fuel_codes_.size() != static_cast<std::size_t>(width) * height) {
        throw ValidationError("fuel code count does not match width x height");
    }
    for (const auto& [code, fuel] : fuel_table_) {
        if (code != fuel.code) {
            throw ValidationError("fuel table key " + std::to_string(code) +
                                  " does not match its model code");
        }
        fuel.validate();
    }
    flammable_.resize(fuel_codes_.size());
    base_prob_.resize(fuel_codes_.size());
    for (std::size_t j = 0; j < fuel_codes_.size(); ++j) {
        auto it = fuel_table_.find(fuel_codes_[j]);
        if (it == fuel_table_.end()) {
            throw ValidationError("unknown fuel code " + std::to_string(fuel_codes_[j]));
        }
        flammable_[j] = it->second.flammable ? 1 : 0;
        base_prob_[j] = it->second.base_spread_prob;
        flammable_count_ += flammable_[j];
    }
}

NeighborList Landscape::neighbors(CellIndex j) const {
    NeighborList out;
    const int r = row(j);
    const int c = col(j);
    for (Compass d : kCompassPoints) {
        const GridStep s = grid_step(d);
        if (contains(r + s.drow, c + s.dcol)) {
            out.push_back({index(r + s.drow, c + s.dcol), d});
        }
    }
    return out;
}

bool Landscape::operator==(const Landscape& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           cell_size_ == other.cell_size_ && xllcorner_ == other.xllcorner_ &&
           yllcorner_ == other.yllcorner_ && fuel_codes_ == other.fuel_codes_ &&
           fuel_table_ == other.fuel_table_;
}

FuelTable read_fuel_lookup(std::istream& in) {
    FuelTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto fields = split_csv(t);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "code" || fields[1] != "name" ||
                fields[2] != "flammable" || fields[3] != "base_spread_prob") {
                throw FormatError("fuel lookup line " + std::to_string(line_no) +
                                  ": expected header code,name,flammable,base_spread_prob");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw FormatError("fuel lookup line " + std::to_string(line_no) +
                              ": expected 4 fields, found " + std::to_string(fields.size()));
        }
        FuelModel fuel;
        fuel.name = fields[1];
        if (!parse_value(fields[0], fuel.code) || !parse_bool(fields[2], fuel.flammable) ||
            !parse_value(fields[3], fuel.base_spread_prob)) {
            throw FormatError("fuel lookup line " + std::to_string(line_no) +
                              ": malformed row '" + t + "'");
        }
        fuel.validate();
        if (!table.emplace(fuel.code, fuel).second) {
            throw ValidationError("fuel lookup line " + std::to_string(line_no) +
                                  ": duplicate fuel code " + std::to_string(fuel.code));
        }
    }
    if (!header_seen) {
        throw FormatError("fuel lookup: missing header row");
    }
    return table;
}

FuelTable read_fuel_lookup(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open fuel lookup " + path.string());
    }
    return read_fuel_lookup(in);
}

void write_fuel_lookup(std::ostream& out, const FuelTable& table) {
    out << "code,name,flammable,base_spread_prob\n" << std::setprecision(17);
    for (const auto& [code, fuel] : table) {
        if (code == kNoDataFuelCode) {
            continue;
        }
        out << code << ',' << fuel.name << ',' << (fuel.flammable ? "true" : "false") << ','
            << fuel.base_spread_prob << '\n';
    }
}

Landscape landscape_from_grid(const AsciiGrid& grid, FuelTable table) {
    std::vector<int> codes(grid.values.size());
    bool has_nodata = false;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        if (grid.is_nodata(i)) {
            codes[i] = kNoDataFuelCode;
            has_nodata = true;
            continue;
        }
        const double v = grid.values[i];
        if (v != std::floor(v) || std::abs(v) > 2e9) {
            throw FormatError("fuel raster cell " + std::to_string(i) +
                              " holds non-integer value");
        }
        codes[i] = static_cast<int>(v);
    }
    if (has_nodata) {
        table.insert_or_assign(kNoDataFuelCode, nodata_fuel());
    }
    return Landscape(grid.ncols, grid.nrows, grid.cellsize, std::move(codes), std::move(table),
                     grid.xllcorner, grid.yllcorner);
}

AsciiGrid fuel_grid(const Landscape& landscape) {
    AsciiGrid grid;
    grid.ncols = landscape.width();
    grid.nrows = landscape.height();
    grid.cellsize = landscape.cell_size();
    grid.xllcorner = landscape.xllcorner();
    grid.yllcorner = landscape.yllcorner();
    grid.nodata_value = kNoDataFuelCode;
    grid.values.assign(landscape.fuel_codes().begin(), landscape.fuel_codes().end());
    return grid;
}

Landscape load_landscape(const std::filesystem::path& fuel_raster,
                         const std::filesystem::path& lookup,
                         const TopographyRasters& topography) {
    const AsciiGrid grid = read_ascii_grid(fuel_raster);
    FuelTable table = read_fuel_lookup(lookup);
    for (const auto* layer : {&topography.elevation, &topography.slope, &topography.aspect}) {
        if (!*layer) {
            continue;
        }
        const AsciiGrid topo = read_ascii_grid(**layer);
        if (topo.ncols != grid.ncols || topo.nrows != grid.nrows) {
            throw FormatError(layer->value().string() + ": dimensions " +
                              std::to_string(topo.ncols) + "x" + std::to_string(topo.nrows) +
                              " differ from fuel raster");
        }
    }
    return landscape_from_grid(grid, std::move(table));
}

void save_landscape(const Landscape& landscape, const std::filesystem::path& fuel_raster,
                    const std::filesystem::path& lookup) {
    write_ascii_grid(fuel_raster, fuel_grid(landscape));
    std::ofstream out(lookup);
    if (!out) {
        throw std::runtime_error("cannot write fuel lookup " + lookup.string());
    }
    write_fuel_lookup(out, landscape.fuel_table());
}

Landscape synthetic_landscape(int width, int height, double base_spread_prob, double cell_size) {
    if (width < 1 || height < 1) {
        throw ValidationError("synthetic landscape needs width, height >= 1");
    }
    FuelTable table;
    table.emplace(1, FuelModel{1, "synthetic", true, base_spread_prob});
    return Landscape(width, height, cell_size,
                     std::vector<int>(static_cast<std::size_t>(width) * height, 1),
                     std::move(table));
}

CellMask CellMask::from_cells(std::size_t cell_count, std::span<const CellIndex> cells) {
    CellMask mask(cell_count);
    for (CellIndex j : cells) {
        mask.insert(j);
    }
    return mask;
}

std::vector<CellIndex> CellMask::cells() const {
    std::vector<CellIndex> out;
    out.reserve(count_);
    for (std::size_t j = 0; j < bits_.size(); ++j) {
        if (bits_[j]) {
            out.push_back(static_cast<CellIndex>(j));
        }
    }
    return out;
}

} // namespace firebreak
