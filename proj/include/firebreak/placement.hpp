#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firebreak/ascii_grid.hpp"
#include "firebreak/landscape.hpp"
#include "firebreak/random.hpp"

namespace firebreak {

enum class Orientation : std::uint8_t { Deg0, Deg90, Deg180, Deg270 };

inline constexpr std::array<Orientation, 4> kOrientations{
    Orientation::Deg0, Orientation::Deg90, Orientation::Deg180, Orientation::Deg270};

int degrees(Orientation o);
Orientation orientation_from_degrees(int degrees);  // throws FormatError

struct Offset {
    int row = 0;
    int col = 0;
    auto operator<=>(const Offset&) const = default;
};

// Rigid firebreak pattern. Offsets are normalized so that the bounding box of
// every orientation starts at (0, 0); orientation k is k clockwise quarter
// turns of orientation 0.
class BlockShape {
public:
    BlockShape(std::string name, std::vector<Offset> offsets);

    // 20-cell U: an 8-cell bottom row and two 7-cell arms, open to the north
    // at 0 degrees.
    static BlockShape u_shape();
    static BlockShape single_cell();
    // One "row,col" pair per line; '#' starts a comment.
    static BlockShape read(std::istream& in, std::string name);
    static BlockShape load(const std::filesystem::path& path);

    const std::string& name() const { return name_; }
    std::size_t size() const { return rotations_[0].size(); }
    std::span<const Offset> offsets(Orientation o = Orientation::Deg0) const {
        return rotations_[static_cast<std::size_t>(o)];
    }
    int rows(Orientation o) const { return extents_[static_cast<std::size_t>(o)].row; }
    int cols(Orientation o) const { return extents_[static_cast<std::size_t>(o)].col; }

private:
    std::string name_;
    std::array<std::vector<Offset>, 4> rotations_;
    std::array<Offset, 4> extents_{};
};

std::shared_ptr<const BlockShape> default_shape();

// Anchor is the north-west corner of the oriented shape's bounding box.
struct FirebreakBlock {
    CellIndex anchor = 0;
    Orientation orientation = Orientation::Deg0;
    auto operator<=>(const FirebreakBlock&) const = default;
};

// Sorted cells of the placed block; throws PlacementError when a cell is off
// the grid or non-flammable.
std::vector<CellIndex> realize_block(const Landscape& landscape, const BlockShape& shape,
                                     FirebreakBlock block);
// Non-throwing variant; clears `out` and returns false on failure.
bool try_realize_block(const Landscape& landscape, const BlockShape& shape, FirebreakBlock block,
                       std::vector<CellIndex>& out);

// Set of placed blocks and the union of their cells (the treated cells).
// Blocks are kept sorted and unique.
class Solution {
public:
    explicit Solution(std::shared_ptr<const BlockShape> shape = default_shape());

    // Throws PlacementError if any block cannot be realized.
    static Solution from_blocks(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                                std::vector<FirebreakBlock> blocks);

    const BlockShape& shape() const { return *shape_; }
    const std::shared_ptr<const BlockShape>& shape_ptr() const { return shape_; }
    const std::vector<FirebreakBlock>& blocks() const { return blocks_; }
    const std::vector<CellIndex>& cells() const { return cells_; }
    std::size_t treated_count() const { return cells_.size(); }

    CellMask mask(const Landscape& landscape) const;
    // 16 hex digits derived from the treated cells.
    std::string id() const;

    bool operator==(const Solution& other) const;

private:
    std::shared_ptr<const BlockShape> shape_;
    std::vector<FirebreakBlock> blocks_;
    std::vector<CellIndex> cells_;
};

// Budget in cells: floor(alpha * flammable cells). Throws ConfigError for alpha outside [0,1].
std::size_t budget_cells(const Landscape& landscape, double alpha);

struct FeasibilityReport {
    bool feasible = true;
    std::vector<std::string> violations;
    explicit operator bool() const { return feasible; }
};

FeasibilityReport is_feasible(const Landscape& landscape, const Solution& solution, double alpha);

// Incremental solution construction under a cell budget, with union counting
// of overlapping blocks.
class SolutionBuilder {
public:
    SolutionBuilder(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                    std::size_t budget);
    SolutionBuilder(const Landscape& landscape, const Solution& start, std::size_t budget);

    std::size_t budget() const { return budget_; }
    std::size_t treated() const { return treated_; }
    std::size_t remaining() const { return budget_ - std::min(budget_, treated_); }
    const std::vector<FirebreakBlock>& blocks() const { return blocks_; }
    bool covers(CellIndex j) const { return cover_[j] != 0; }

    // Cells the block would add, or nullopt if it cannot be realized.
    std::optional<std::size_t> new_cells(FirebreakBlock block) const;
    bool contains(FirebreakBlock block) const;
    // Adds the block if it is realizable, not already present and fits the budget.
    bool try_add(FirebreakBlock block);
    void remove(std::size_t block_index);

    Solution build() const;

private:
    const Landscape* landscape_;
    std::shared_ptr<const BlockShape> shape_;
    std::size_t budget_;
    std::size_t treated_ = 0;
    std::vector<FirebreakBlock> blocks_;
    std::vector<std::uint16_t> cover_;
    mutable std::vector<CellIndex> scratch_;
};

// Uniform random in-grid block (orientation, then anchor).
std::optional<FirebreakBlock> random_block(const Landscape& landscape, const BlockShape& shape,
                                           Rng& rng);

// Random blocks until no further block fits the budget. Throws PlacementError if
// the budget is smaller than one block or no block can be placed.
Solution random_solution(const Landscape& landscape, std::shared_ptr<const BlockShape> shape,
                         double alpha, std::uint64_t seed);

// Budget-many distinct flammable cells sampled uniformly; single-cell blocks.
Solution scattered_solution(const Landscape& landscape, double alpha, std::uint64_t seed);

// Every realizable placement, ordered by (anchor, orientation).
class PlacementCatalog {
public:
    PlacementCatalog(const Landscape& landscape, const BlockShape& shape);

    std::size_t size() const { return blocks_.size(); }
    std::size_t block_size() const { return stride_; }
    FirebreakBlock block(std::size_t i) const { return blocks_[i]; }
    std::span<const CellIndex> cells(std::size_t i) const {
        return {cells_.data() + i * stride_, stride_};
    }

private:
    std::vector<FirebreakBlock> blocks_;
    std::vector<CellIndex> cells_;
    std::size_t stride_;
};

// Text format: optional "# shape: NAME" line, header
// `anchor_row,anchor_col,orientation`, then one block per line (degrees).
void write_solution(std::ostream& out, const Landscape& landscape, const Solution& solution);
void write_solution(const std::filesystem::path& path, const Landscape& landscape,
                    const Solution& solution);
// A file declaring shape "single" is read with the single-cell shape; otherwise
// `shape` is used and a conflicting declared name is a ValidationError.
Solution read_solution(std::istream& in, const Landscape& landscape,
                       std::shared_ptr<const BlockShape> shape = default_shape());
Solution read_solution(const std::filesystem::path& path, const Landscape& landscape,
                       std::shared_ptr<const BlockShape> shape = default_shape());

// 0/1 raster of treated cells.
AsciiGrid treated_raster(const Landscape& landscape, const Solution& solution);

} // namespace firebreak
