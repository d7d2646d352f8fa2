#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firebreak/ascii_grid.hpp"

namespace firebreak {

using CellIndex = std::int32_t;

enum class Compass : std::uint8_t { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<Compass, 8> kCompassPoints{
    Compass::N, Compass::NE, Compass::E, Compass::SE,
    Compass::S, Compass::SW, Compass::W, Compass::NW};

std::string_view to_string(Compass direction);
// Accepts the tokens N, NE, ... NW (case-insensitive). Throws FormatError.
Compass parse_compass(std::string_view token);
Compass opposite(Compass direction);
bool is_diagonal(Compass direction);

// Grid step for a compass point. North is the previous row.
struct GridStep {
    int drow;
    int dcol;
};
GridStep grid_step(Compass direction);

// Fuel code assigned to raster NODATA cells; never flammable.
inline constexpr int kNoDataFuelCode = -9999;

struct FuelModel {
    int code = 0;
    std::string name;
    bool flammable = false;
    // Per-step probability that fire passes into a cell of this fuel under neutral wind.
    double base_spread_prob = 0.0;

    // Throws ValidationError.
    void validate() const;
    bool operator==(const FuelModel&) const = default;
};

using FuelTable = std::map<int, FuelModel>;

struct Neighbor {
    CellIndex cell;
    Compass direction;
};

// At most eight entries; border cells get fewer.
class NeighborList {
public:
    void push_back(Neighbor n) { items_[size_++] = n; }
    std::size_t size() const { return size_; }
    const Neighbor* begin() const { return items_.data(); }
    const Neighbor* end() const { return items_.data() + size_; }
    const Neighbor& operator[](std::size_t i) const { return items_[i]; }

private:
    std::array<Neighbor, 8> items_{};
    std::size_t size_ = 0;
};

// Immutable gridded landscape. Cell index j = row * width + col, row 0 is
// the northern edge.
class Landscape {
public:
    Landscape(int width, int height, double cell_size, std::vector<int> fuel_codes,
              FuelTable fuel_table, double xllcorner = 0.0, double yllcorner = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t cell_count() const { return fuel_codes_.size(); }
    double cell_size() const { return cell_size_; }
    double xllcorner() const { return xllcorner_; }
    double yllcorner() const { return yllcorner_; }

    int row(CellIndex j) const { return j / width_; }
    int col(CellIndex j) const { return j % width_; }
    CellIndex index(int row, int col) const { return row * width_ + col; }
    bool contains(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }
    bool valid(CellIndex j) const {
        return j >= 0 && static_cast<std::size_t>(j) < fuel_codes_.size();
    }

    int fuel_code(CellIndex j) const { return fuel_codes_[j]; }
    const FuelModel& fuel(CellIndex j) const { return fuel_table_.at(fuel_codes_[j]); }
    bool flammable(CellIndex j) const { return flammable_[j] != 0; }
    double base_spread_prob(CellIndex j) const { return base_prob_[j]; }
    std::size_t flammable_count() const { return flammable_count_; }

    const std::vector<int>& fuel_codes() const { return fuel_codes_; }
    const FuelTable& fuel_table() const { return fuel_table_; }

    // Moore neighborhood with the compass direction from j to each neighbor.
    NeighborList neighbors(CellIndex j) const;

    bool operator==(const Landscape& other) const;

private:
    int width_;
    int height_;
    double cell_size_;
    double xllcorner_;
    double yllcorner_;
    std::vector<int> fuel_codes_;
    FuelTable fuel_table_;
    std::vector<std::uint8_t> flammable_;
    std::vector<double> base_prob_;
    std::size_t flammable_count_ = 0;
};

// Optional topography layers. They are checked against the fuel raster's
// dimensions and otherwise unused: the spread model has no slope term.
struct TopographyRasters {
    std::optional<std::filesystem::path> elevation;
    std::optional<std::filesystem::path> slope;
    std::optional<std::filesystem::path> aspect;
};

Landscape load_landscape(const std::filesystem::path& fuel_raster,
                         const std::filesystem::path& lookup,
                         const TopographyRasters& topography = {});

// Header `code,name,flammable,base_spread_prob`.
FuelTable read_fuel_lookup(std::istream& in);
FuelTable read_fuel_lookup(const std::filesystem::path& path);
void write_fuel_lookup(std::ostream& out, const FuelTable& table);

// Builds a landscape from an already-parsed raster. NODATA cells get kNoDataFuelCode.
Landscape landscape_from_grid(const AsciiGrid& grid, FuelTable table);
AsciiGrid fuel_grid(const Landscape& landscape);

void save_landscape(const Landscape& landscape, const std::filesystem::path& fuel_raster,
                    const std::filesystem::path& lookup);

// Homogeneous landscape of a single flammable fuel (code 1).
Landscape synthetic_landscape(int width, int height, double base_spread_prob,
                              double cell_size = 100.0);

// Dense per-cell membership flags, used for firebreak sets and burn masks.
class CellMask {
public:
    CellMask() = default;
    explicit CellMask(std::size_t cell_count) : bits_(cell_count, 0) {}
    static CellMask from_cells(std::size_t cell_count, std::span<const CellIndex> cells);

    std::size_t cell_count() const { return bits_.size(); }
    std::size_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(CellIndex j) const { return bits_[j] != 0; }
    void insert(CellIndex j) {
        if (!bits_[j]) {
            bits_[j] = 1;
            ++count_;
        }
    }
    void erase(CellIndex j) {
        if (bits_[j]) {
            bits_[j] = 0;
            --count_;
        }
    }

    std::vector<CellIndex> cells() const;
    bool operator==(const CellMask&) const = default;

private:
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

} // namespace firebreak
