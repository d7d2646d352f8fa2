#include "firebreak/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "firebreak/errors.hpp"

namespace firebreak {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw FormatError("ascii grid line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& token, std::size_t line_no) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        fail(line_no, "expected a number, got '" + token + "'");
    }
    return value;
}

int parse_dimension(const std::string& token, std::size_t line_no) {
    const double v = parse_number(token, line_no);
    if (v < 1 || v != std::floor(v) || v > 1e8) {
        fail(line_no, "dimension must be a positive integer, got '" + token + "'");
    }
    return static_cast<int>(v);
}

bool starts_with_letter(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos != std::string::npos && std::isalpha(static_cast<unsigned char>(line[pos]));
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

} // namespace

AsciiGrid read_ascii_grid(std::istream& in) {
    AsciiGrid grid;
    bool have_cols = false, have_rows = false, have_cellsize = false;
    bool have_x = false, have_y = false;
    bool x_center = false, y_center = false;

    std::string line;
    std::size_t line_no = 0;

    // Header: keyword lines until the first numeric line.
    while (true) {
        const auto pos = in.tellg();
        if (!std::getline(in, line)) {
            break;
        }
        ++line_no;
        if (blank(line)) {
            continue;
        }
        if (!starts_with_letter(line)) {
            in.clear();
            in.seekg(pos);
            --line_no;
            break;
        }
        std::istringstream fields(line);
        std::string key, value, extra;
        fields >> key >> value;
        if (value.empty() || (fields >> extra)) {
            fail(line_no, "malformed header '" + line + "'");
        }
        key = lower(key);
        if (key == "ncols") {
            grid.ncols = parse_dimension(value, line_no);
            have_cols = true;
        } else if (key == "nrows") {
            grid.nrows = parse_dimension(value, line_no);
            have_rows = true;
        } else if (key == "xllcorner" || key == "xllcenter") {
            grid.xllcorner = parse_number(value, line_no);
            x_center = key == "xllcenter";
            have_x = true;
        } else if (key == "yllcorner" || key == "yllcenter") {
            grid.yllcorner = parse_number(value, line_no);
            y_center = key == "yllcenter";
            have_y = true;
        } else if (key == "cellsize") {
            grid.cellsize = parse_number(value, line_no);
            if (!(grid.cellsize > 0)) {
                fail(line_no, "cellsize must be positive");
            }
            have_cellsize = true;
        } else if (key == "nodata_value") {
            grid.nodata_value = parse_number(value, line_no);
        } else {
            fail(line_no, "unknown header key '" + key + "'");
        }
    }

    if (!have_cols || !have_rows || !have_cellsize || !have_x || !have_y) {
        fail(line_no + 1, "incomplete header (need ncols, nrows, xllcorner, yllcorner, cellsize)");
    }
    if (x_center) {
        grid.xllcorner -= grid.cellsize / 2;
    }
    if (y_center) {
        grid.yllcorner -= grid.cellsize / 2;
    }

    grid.values.reserve(static_cast<std::size_t>(grid.ncols) * grid.nrows);
    int rows_read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        if (rows_read == grid.nrows) {
            fail(line_no, "more data rows than nrows=" + std::to_string(grid.nrows));
        }
        std::istringstream fields(line);
        std::string token;
        int count = 0;
        while (fields >> token) {
            grid.values.push_back(parse_number(token, line_no));
            ++count;
        }
        if (count != grid.ncols) {
            fail(line_no, "expected " + std::to_string(grid.ncols) + " values, found " +
                              std::to_string(count));
        }
        ++rows_read;
    }
    if (rows_read != grid.nrows) {
        fail(line_no, "declared nrows=" + std::to_string(grid.nrows) + " but found " +
                          std::to_string(rows_read) + " data rows");
    }
    return grid;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open raster " + path.string());
    }
    try {
        return read_ascii_grid(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_ascii_grid(std::ostream& out, const AsciiGrid& grid) {
    out << "ncols " << grid.ncols << '\n'
        << "nrows " << grid.nrows << '\n'
        << std::setprecision(17)
        << "xllcorner " << grid.xllcorner << '\n'
        << "yllcorner " << grid.yllcorner << '\n'
        << "cellsize " << grid.cellsize << '\n'
        << "NODATA_value " << grid.nodata_value << '\n';
    std::size_t i = 0;
    for (int r = 0; r < grid.nrows; ++r) {
        for (int c = 0; c < grid.ncols; ++c, ++i) {
            if (c) {
                out << ' ';
            }
            const double v = grid.values[i];
            if (v == std::floor(v) && std::abs(v) < 1e15) {
                out << static_cast<long long>(v);
            } else {
                out << v;
            }
        }
        out << '\n';
    }
}

void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write raster " + path.string());
    }
    write_ascii_grid(out, grid);
}

} // namespace firebreak
