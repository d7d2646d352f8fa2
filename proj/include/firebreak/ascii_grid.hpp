#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace firebreak {

// ESRI ASCII Grid raster. Values are row-major from the north-west corner.
struct AsciiGrid {
    int ncols = 0;
    int nrows = 0;
    double xllcorner = 0.0;
    double yllcorner = 0.0;
    double cellsize = 1.0;
    double nodata_value = -9999.0;
    std::vector<double> values;

    bool is_nodata(std::size_t i) const { return values[i] == nodata_value; }
};

// Accepts the six standard header keys in any order (case-insensitive);
// xllcenter/yllcenter are converted to corner coordinates.
// Throws FormatError naming the offending line.
AsciiGrid read_ascii_grid(std::istream& in);
AsciiGrid read_ascii_grid(const std::filesystem::path& path);

void write_ascii_grid(std::ostream& out, const AsciiGrid& grid);
void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid);

} // namespace firebreak
