#include "firebreak/placement.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "firebreak/errors.hpp"

namespace firebreak {
namespace {

std::vector<Offset> normalized(std::vector<Offset> offsets) {
    int min_r = std::numeric_limits<int>::max();
    int min_c = std::numeric_limits<int>::max();
    for (const Offset& o : offsets) {
        min_r = std::min(min_r, o.row);
        min_c = std::min(min_c, o.col);
    }
    for (Offset& o : offsets) {
        o.row -= min_r;
        o.col -= min_c;
    }
    std::sort(offsets.begin(), offsets.end());
    return offsets;
}

std::vector<Offset> rotated_clockwise(const std::vector<Offset>& offsets) {
    std::vector<Offset> out;
    out.reserve(offsets.size());
    for (const Offset& o : offsets) {
        out.push_back({o.col, -o.row});
    }
    return normalized(std::move(out));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

bool parse_int(const std::string& token, int& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::string normalized_line = line;
    std::replace(normalized_line.begin(), normalized_line.end(), ',', ' ');
    std::istringstream in(normalized_line);
    std::vector<std::string> fields;
    std::string f;
    while (in >> f) {
        fields.push_back(f);
    }
    return fields;
}

} // namespace

int degrees(Orientation o) {
    return 90 * static_cast<int>(o);
}

Orientation orientation_from_degrees(int deg) {
    if (deg < 0 || deg > 270 || deg % 90 != 0) {
        throw FormatError("orientation must be 0, 90, 180 or 270 degrees, got " +
                          std::to_string(deg));
    }
    return kOrientations[static_cast<std::size_t>(deg / 90)];
}

BlockShape::BlockShape(std::string name, std::vector<Offset> offsets) : name_(std::move(name)) {
    if (offsets.empty()) {
        throw ValidationError("block shape '" + name_ + "' has no cells");
    }
    rotations_[0] = normalized(std::move(offsets));
    if (std::adjacent_find(rotations_[0].begin(), rotations_[0].end()) != rotations_[0].end()) {
        throw ValidationError("block shape '" + name_ + "' has duplicate offsets");
    }
    for (std::size_t k = 1; k < 4; ++k) {
        rotations_[k] = rotated_clockwise(rotations_[k - 1]);
    }
    for (std::size_t k = 0; k < 4; ++k) {
        Offset extent{0, 0};
        for (const Offset& o : rotations_[k]) {
            extent.row = std::max(extent.row, o.row + 1);
            extent.col = std::max(extent.col, o.col + 1);
        }
        extents_[k] = extent;
    }
}

BlockShape BlockShape::u_shape() {
    std::vector<Offset> offsets;
    for (int c = 0; c < 8; ++c) {
        offsets.push_back({6, c});
    }
    for (int r = 0; r < 6; ++r) {
        offsets.push_back({r, 0});
        offsets.push_back({r, 7});
    }
    return BlockShape("u20", std::move(offsets));
}

BlockShape BlockShape::single_cell() {
    return BlockShape("single", {{0, 0}});
}

BlockShape BlockShape::read(std::istream& in, std::string name) {
    std::vector<Offset> offsets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) {
            continue;
        }
        const auto fields = split_fields(t);
        Offset o;
        if (fields.size() != 2 || !parse_int(fields[0], o.row) || !parse_int(fields[1], o.col)) {
            if (offsets.empty() && fields.size() == 2 && fields[0] == "row" && fields[1] == "col") {
                continue;
            }
            throw FormatError("shape file line " + std::to_string(line_no) +
                              ": expected 'row,col', got '" + t + "'");
        }
        offsets.push_back(o);
    }
    return BlockShape(std::move(name), std::move(offsets));
}

BlockShape BlockShape::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open shape file " + path.string());
    }
    return read(in, path.stem().string());
}

std::shared_ptr<const BlockShape> default_shape() {
    static const auto shape = std::make_shared<const BlockShape>(BlockShape::u_shape());
    return shape;
}

bool try_realize_block(const Landscape& landscape, const BlockShape& shape, FirebreakBlock block,
                       std::vector<CellIndex>& out) {
    out.clear();
    if (!landscape.valid(block.anchor)) {
        return false;
    }
    const int r0 = landscape.row(block.anchor);
    const int c0 = landscape.col(block.anchor);
    if (r0 + shape.rows(block.orientation) > landscape.height() ||
        c0 + shape.cols(block.orientation) > landscape.width()) {
        return false;
    }
    for (const Offset& o : shape.offsets(block.orientation)) {
        const CellIndex j = landscape.index(r0 + o.row, c0 + o.col);
        if (!landscape.flammable(j)) {
            out.clear();
            return false;
        }
        out.push_back(j);
    }
    std::sort(out.begin(), out.end());
    return true;
}

std::vector<CellIndex> realize_block(const Landscape& landscape, const BlockShape& shape,
                                     FirebreakBlock block) {
    if (!landscape.valid(block.anchor)) {
        throw PlacementError("block anchor " + std::to_string(block.anchor) + " is off the grid");
    }
    const int r0 = landscape.row(block.anchor);
    const int c0 = landscape.col(block.anchor);
    std::vector<CellIndex> cells;
    for (const Offset& o : shape.offsets(block.orientation)) {
        if (!landscape.contains(r0 + o.row, c0 + o.col)) {
            throw PlacementError("block at (" + std::to_string(r0) + "," + std::to_string(c0) +
                                 ") orientation " + std::to_string(degrees(block.orientation)) +
                                 " leaves the grid");
        }
        const CellIndex j = landscape.index(r0 + o.row, c0 + o.col);
        if (!landscape.flammable(j)) {
            throw PlacementError("block at (" + std::to_string(r0) + "," + std::to_string(c0) +
                                 ") covers non-flammable cell " + std::to_string(j));
        }
        cells.push_back(j);
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

Solution::Solution(std::shared_ptr<const BlockShape> shape) : shape_(std::move(shape)) {
    if (!shape_) {
        throw ValidationError("solution needs a block shape");
    }
}

Solution Solution::from_blocks(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                               std::vector<FirebreakBlock> blocks) {
    Solution s(std::move(shape));
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    for (const FirebreakBlock& b : blocks) {
        const auto cells = realize_block(landscape, *s.shape_, b);
        s.cells_.insert(s.cells_.end(), cells.begin(), cells.end());
    }
    std::sort(s.cells_.begin(), s.cells_.end());
    s.cells_.erase(std::unique(s.cells_.begin(), s.cells_.end()), s.cells_.end());
    s.blocks_ = std::move(blocks);
    return s;
}

CellMask Solution::mask(const Landscape& landscape) const {
    return CellMask::from_cells(landscape.cell_count(), cells_);
}

std::string Solution::id() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (CellIndex j : cells_) {
        auto v = static_cast<std::uint32_t>(j);
        for (int b = 0; b < 4; ++b) {
            h ^= (v >> (8 * b)) & 0xFFu;
            h *= 0x100000001b3ULL;
        }
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = kHex[h & 0xF];
        h >>= 4;
    }
    return out;
}

bool Solution::operator==(const Solution& other) const {
    return shape_->name() == other.shape_->name() && blocks_ == other.blocks_ &&
           cells_ == other.cells_;
}

std::size_t budget_cells(const Landscape& landscape, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ConfigError("alpha must lie in [0,1]");
    }
    return static_cast<std::size_t>(
        std::floor(alpha * static_cast<double>(landscape.flammable_count()) + 1e-9));
}

FeasibilityReport is_feasible(const Landscape& landscape, const Solution& solution, double alpha) {
    FeasibilityReport report;
    auto violate = [&](std::string what) {
        report.feasible = false;
        report.violations.push_back(std::move(what));
    };
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        violate("alpha outside [0,1]");
        return report;
    }
    std::vector<CellIndex> expected;
    std::vector<CellIndex> cells;
    for (const FirebreakBlock& b : solution.blocks()) {
        if (!try_realize_block(landscape, solution.shape(), b, cells)) {
            violate("block at anchor " + std::to_string(b.anchor) + " orientation " +
                    std::to_string(degrees(b.orientation)) +
                    " leaves the grid or covers non-flammable cells");
            continue;
        }
        expected.insert(expected.end(), cells.begin(), cells.end());
    }
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    if (report.feasible && expected != solution.cells()) {
        violate("treated cells differ from the union of block cells");
    }
    const std::size_t budget = budget_cells(landscape, alpha);
    if (solution.treated_count() > budget) {
        violate("budget exceeded: " + std::to_string(solution.treated_count()) +
                " treated cells > " + std::to_string(budget) + " allowed");
    }
    return report;
}

SolutionBuilder::SolutionBuilder(const Landscape& landscape,
                                 std::shared_ptr<const BlockShape> shape, std::size_t budget)
    : landscape_(&landscape),
      shape_(std::move(shape)),
      budget_(budget),
      cover_(landscape.cell_count(), 0) {}

SolutionBuilder::SolutionBuilder(const Landscape& landscape, const Solution& start,
                                 std::size_t budget)
    : SolutionBuilder(landscape, start.shape_ptr(), budget) {
    for (const FirebreakBlock& b : start.blocks()) {
        if (!try_add(b)) {
            throw PlacementError("starting solution does not fit the builder budget");
        }
    }
}

std::optional<std::size_t> SolutionBuilder::new_cells(FirebreakBlock block) const {
    if (!try_realize_block(*landscape_, *shape_, block, scratch_)) {
        return std::nullopt;
    }
    std::size_t added = 0;
    for (CellIndex j : scratch_) {
        added += cover_[j] == 0;
    }
    return added;
}

bool SolutionBuilder::contains(FirebreakBlock block) const {
    return std::find(blocks_.begin(), blocks_.end(), block) != blocks_.end();
}

bool SolutionBuilder::try_add(FirebreakBlock block) {
    const auto added = new_cells(block);
    if (!added || treated_ + *added > budget_ || contains(block)) {
        return false;
    }
    for (CellIndex j : scratch_) {
        ++cover_[j];
    }
    treated_ += *added;
    blocks_.push_back(block);
    return true;
}

void SolutionBuilder::remove(std::size_t block_index) {
    const FirebreakBlock block = blocks_.at(block_index);
    try_realize_block(*landscape_, *shape_, block, scratch_);
    for (CellIndex j : scratch_) {
        if (--cover_[j] == 0) {
            --treated_;
        }
    }
    blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(block_index));
}

Solution SolutionBuilder::build() const {
    return Solution::from_blocks(*landscape_, shape_, blocks_);
}

std::optional<FirebreakBlock> random_block(const Landscape& landscape, const BlockShape& shape,
                                           Rng& rng) {
    const Orientation o = kOrientations[rng.index(kOrientations.size())];
    const int rows = landscape.height() - shape.rows(o) + 1;
    const int cols = landscape.width() - shape.cols(o) + 1;
    if (rows <= 0 || cols <= 0) {
        return std::nullopt;
    }
    const int r = static_cast<int>(rng.index(static_cast<std::size_t>(rows)));
    const int c = static_cast<int>(rng.index(static_cast<std::size_t>(cols)));
    return FirebreakBlock{landscape.index(r, c), o};
}

Solution random_solution(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                         double alpha, std::uint64_t seed) {
    constexpr int kMaxConsecutiveFailures = 2000;
    const std::size_t budget = budget_cells(landscape, alpha);
    if (budget < shape->size()) {
        throw PlacementError("budget of " + std::to_string(budget) +
                             " cells is smaller than one block of " +
                             std::to_string(shape->size()));
    }
    Rng rng(seed);
    SolutionBuilder builder(landscape, shape, budget);
    int failures = 0;
    while (builder.remaining() > 0 && failures < kMaxConsecutiveFailures) {
        const auto block = random_block(landscape, *shape, rng);
        if (block && builder.try_add(*block)) {
            failures = 0;
        } else {
            ++failures;
        }
    }
    if (builder.blocks().empty()) {
        throw PlacementError("no block placement found after " +
                             std::to_string(kMaxConsecutiveFailures) + " attempts");
    }
    return builder.build();
}

Solution scattered_solution(const Landscape& landscape, double alpha, std::uint64_t seed) {
    static const auto single = std::make_shared<const BlockShape>(BlockShape::single_cell());
    const std::size_t budget = budget_cells(landscape, alpha);
    std::vector<CellIndex> flammable;
    flammable.reserve(landscape.flammable_count());
    for (std::size_t j = 0; j < landscape.cell_count(); ++j) {
        if (landscape.flammable(static_cast<CellIndex>(j))) {
            flammable.push_back(static_cast<CellIndex>(j));
        }
    }
    const std::size_t k = std::min(budget, flammable.size());
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(flammable[i], flammable[i + rng.index(flammable.size() - i)]);
    }
    std::vector<FirebreakBlock> blocks;
    blocks.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        blocks.push_back({flammable[i], Orientation::Deg0});
    }
    return Solution::from_blocks(landscape, single, std::move(blocks));
}

PlacementCatalog::PlacementCatalog(const Landscape& landscape, const BlockShape& shape)
    : stride_(shape.size()) {
    std::vector<CellIndex> cells;
    for (std::size_t j = 0; j < landscape.cell_count(); ++j) {
        for (Orientation o : kOrientations) {
            const FirebreakBlock b{static_cast<CellIndex>(j), o};
            if (try_realize_block(landscape, shape, b, cells)) {
                blocks_.push_back(b);
                cells_.insert(cells_.end(), cells.begin(), cells.end());
            }
        }
    }
}

void write_solution(std::ostream& out, const Landscape& landscape, const Solution& solution) {
    out << "# shape: " << solution.shape().name() << '\n'
        << "anchor_row,anchor_col,orientation\n";
    for (const FirebreakBlock& b : solution.blocks()) {
        out << landscape.row(b.anchor) << ',' << landscape.col(b.anchor) << ','
            << degrees(b.orientation) << '\n';
    }
}

void write_solution(const std::filesystem::path& path, const Landscape& landscape,
                    const Solution& solution) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write solution " + path.string());
    }
    write_solution(out, landscape, solution);
}

Solution read_solution(std::istream& in, const Landscape& landscape,
                       std::shared_ptr<const BlockShape> shape) {
    std::vector<FirebreakBlock> blocks;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.front() == '#') {
            const auto pos = t.find("shape:");
            if (pos != std::string::npos) {
                const std::string declared = trim(t.substr(pos + 6));
                if (declared == "single") {
                    shape = std::make_shared<const BlockShape>(BlockShape::single_cell());
                } else if (declared != shape->name()) {
                    throw ValidationError("solution declares shape '" + declared +
                                          "' but shape '" + shape->name() + "' was supplied");
                }
            }
            continue;
        }
        const auto fields = split_fields(t);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"anchor_row", "anchor_col", "orientation"}) {
                throw FormatError("solution line " + std::to_string(line_no) +
                                  ": expected header anchor_row,anchor_col,orientation");
            }
            header_seen = true;
            continue;
        }
        int r = 0, c = 0, deg = 0;
        if (fields.size() != 3 || !parse_int(fields[0], r) || !parse_int(fields[1], c) ||
            !parse_int(fields[2], deg)) {
            throw FormatError("solution line " + std::to_string(line_no) + ": malformed row '" +
                              t + "'");
        }
        if (!landscape.contains(r, c)) {
            throw PlacementError("solution line " + std::to_string(line_no) +
                                 ": anchor off the grid");
        }
        blocks.push_back({landscape.index(r, c), orientation_from_degrees(deg)});
    }
    if (!header_seen) {
        throw FormatError("solution: missing header row");
    }
    return Solution::from_blocks(landscape, std::move(shape), std::move(blocks));
}

Solution read_solution(const std::filesystem::path& path, const Landscape& landscape,
                       std::shared_ptr<const BlockShape> shape) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open solution " + path.string());
    }
    return read_solution(in, landscape, std::move(shape));
}

AsciiGrid treated_raster(const Landscape& landscape, const Solution& solution) {
    AsciiGrid grid;
    grid.ncols = landscape.width();
    grid.nrows = landscape.height();
    grid.cellsize = landscape.cell_size();
    grid.xllcorner = landscape.xllcorner();
    grid.yllcorner = landscape.yllcorner();
    grid.nodata_value = -9999;
    grid.values.assign(landscape.cell_count(), 0.0);
    for (CellIndex j : solution.cells()) {
        grid.values[j] = 1.0;
    }
    return grid;
}

} // namespace firebreak
