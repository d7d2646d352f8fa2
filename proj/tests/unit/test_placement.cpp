#include <doctest.h>

#include <set>
#include <sstream>

#include "firebreak/errors.hpp"
#include "firebreak/placement.hpp"
#include "helpers.hpp"

using namespace firebreak;

namespace {

// Quarter turn clockwise, then shifted back to a (0, 0) bounding box.
std::vector<Offset> rotate_cw(const std::vector<Offset>& in) {
    std::vector<Offset> out;
    int min_r = 1 << 20, min_c = 1 << 20;
    for (const Offset& o : in) {
        out.push_back({o.col, -o.row});
        min_r = std::min(min_r, o.col);
        min_c = std::min(min_c, -o.row);
    }
    for (Offset& o : out) {
        o.row -= min_r;
        o.col -= min_c;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Offset> sorted(std::span<const Offset> s) {
    std::vector<Offset> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
}

// Disjoint U placements tiled on a 100x100 grid (7 x 8 boxes at 0 degrees).
std::vector<FirebreakBlock> tiled_blocks(const Landscape& l, std::size_t n) {
    std::vector<FirebreakBlock> blocks;
    for (int r = 0; r + 7 <= 100 && blocks.size() < n; r += 7) {
        for (int c = 0; c + 8 <= 100 && blocks.size() < n; c += 8) {
            blocks.push_back({l.index(r, c), Orientation::Deg0});
        }
    }
    return blocks;
}

} // namespace

TEST_CASE("default U shape") {
    const BlockShape u = BlockShape::u_shape();
    CHECK(u.size() == 20);
    CHECK(u.rows(Orientation::Deg0) == 7);
    CHECK(u.cols(Orientation::Deg0) == 8);
    CHECK(u.rows(Orientation::Deg90) == 8);
    CHECK(u.cols(Orientation::Deg90) == 7);
    // Open to the north: the top row holds only the two arm tips.
    std::size_t top = 0;
    for (const Offset& o : u.offsets(Orientation::Deg0)) {
        top += o.row == 0;
    }
    CHECK(top == 2);
    CHECK(default_shape()->name() == "u20");
}

TEST_CASE("orientations are successive clockwise quarter turns") {
    for (const BlockShape& shape :
         {BlockShape::u_shape(), BlockShape("ell", {{0, 0}, {1, 0}, {2, 0}, {2, 1}})}) {
        std::vector<Offset> current = sorted(shape.offsets(Orientation::Deg0));
        for (Orientation o : kOrientations) {
            CHECK(sorted(shape.offsets(o)) == current);
            current = rotate_cw(current);
        }
        CHECK(current == sorted(shape.offsets(Orientation::Deg0)));
    }
}

TEST_CASE("realize_block") {
    const Landscape l = synthetic_landscape(30, 30, 0.3);
    const BlockShape u = BlockShape::u_shape();
    std::set<std::vector<CellIndex>> distinct;
    for (Orientation o : kOrientations) {
        const auto cells = realize_block(l, u, {l.index(10, 10), o});
        CHECK(cells.size() == 20);
        CHECK(std::is_sorted(cells.begin(), cells.end()));
        distinct.insert(cells);
    }
    CHECK(distinct.size() == 4);
    CHECK_THROWS_AS(realize_block(l, u, {l.index(29, 29), Orientation::Deg0}), PlacementError);
    CHECK_THROWS_AS(realize_block(l, u, {l.index(0, 25), Orientation::Deg0}), PlacementError);
    CHECK_NOTHROW(realize_block(l, u, {l.index(23, 22), Orientation::Deg0}));

    FuelTable t;
    t.emplace(1, FuelModel{1, "grass", true, 0.5});
    t.emplace(2, FuelModel{2, "rock", false, 0.0});
    std::vector<int> codes(100, 1);
    codes[l.index(0, 0)] = 2;
    const Landscape rocky(10, 10, 1.0, codes, t);
    CHECK_THROWS_AS(realize_block(rocky, u, {0, Orientation::Deg0}), PlacementError);
    std::vector<CellIndex> out{1, 2};
    CHECK_FALSE(try_realize_block(rocky, u, {0, Orientation::Deg0}, out));
    CHECK(out.empty());
}

TEST_CASE("budget feasibility at the boundary") {
    const Landscape l = synthetic_landscape(100, 100, 0.3);
    CHECK(budget_cells(l, 0.05) == 500);
    CHECK(budget_cells(l, 0.075) == 750);
    CHECK(budget_cells(l, 0.0) == 0);
    CHECK(is_feasible(l, Solution(), 0.05).feasible);
    CHECK(is_feasible(l, Solution(), 0.0).feasible);

    const Solution s25 = Solution::from_blocks(l, default_shape(), tiled_blocks(l, 25));
    CHECK(s25.treated_count() == 500);
    CHECK(is_feasible(l, s25, 0.05).feasible);
    const Solution s26 = Solution::from_blocks(l, default_shape(), tiled_blocks(l, 26));
    CHECK(s26.treated_count() == 520);
    const auto report = is_feasible(l, s26, 0.05);
    CHECK_FALSE(report.feasible);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].find("budget") != std::string::npos);
}

TEST_CASE("overlapping blocks are counted once") {
    const Landscape l = synthetic_landscape(40, 40, 0.3);
    const FirebreakBlock a{l.index(10, 10), Orientation::Deg0};
    const FirebreakBlock b{l.index(10, 10), Orientation::Deg180};
    const Solution s = Solution::from_blocks(l, default_shape(), {a, b, a});
    CHECK(s.blocks().size() == 2);
    std::set<CellIndex> cells;
    for (const auto& blk : s.blocks()) {
        for (CellIndex j : realize_block(l, *default_shape(), blk)) {
            cells.insert(j);
        }
    }
    CHECK(s.treated_count() == cells.size());
    CHECK(s.treated_count() == 26);

    SolutionBuilder builder(l, default_shape(), 30);
    CHECK(builder.try_add(a));
    CHECK(builder.remaining() == 10);
    CHECK(builder.new_cells(b) == 6u);
    CHECK(builder.try_add(b));
    CHECK(builder.treated() == 26);
    CHECK_FALSE(builder.try_add(a));
}

TEST_CASE("random_solution") {
    const Landscape l = synthetic_landscape(100, 100, 0.35);
    CHECK(random_solution(l, default_shape(), 0.002, 1).blocks().size() == 1);
    CHECK(random_solution(l, default_shape(), 0.05, 8) ==
          random_solution(l, default_shape(), 0.05, 8));
    CHECK_FALSE(random_solution(l, default_shape(), 0.05, 8) ==
                random_solution(l, default_shape(), 0.05, 9));
    CHECK_THROWS_AS(random_solution(l, default_shape(), 0.001, 1), PlacementError);

    const std::size_t budget = budget_cells(l, 0.10);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Solution s = random_solution(l, default_shape(), 0.10, seed);
        CHECK(s.treated_count() <= budget);
        CHECK(s.treated_count() > budget - 19);
        CHECK(is_feasible(l, s, 0.10).feasible);
    }
}

TEST_CASE("scattered_solution") {
    const Landscape l = synthetic_landscape(100, 100, 0.35);
    const Solution s = scattered_solution(l, 0.01, 4);
    CHECK(s.treated_count() == 100);
    CHECK(std::set<CellIndex>(s.cells().begin(), s.cells().end()).size() == 100);
    CHECK(s.shape().size() == 1);
    CHECK(s == scattered_solution(l, 0.01, 4));
    CHECK(scattered_solution(l, 1.0, 4).treated_count() == 10000);
    CHECK(is_feasible(l, s, 0.01).feasible);
}

TEST_CASE("placement catalogue enumerates every fitting block") {
    const Landscape l = synthetic_landscape(100, 100, 0.35);
    const PlacementCatalog catalog(l, *default_shape());
    CHECK(catalog.size() == 4 * 94 * 93);
    CHECK(catalog.block_size() == 20);
    for (std::size_t i = 1; i < catalog.size(); ++i) {
        CHECK(catalog.block(i - 1) < catalog.block(i));
    }
    const std::size_t probe = 12345;
    const auto cells = catalog.cells(probe);
    CHECK(std::vector<CellIndex>(cells.begin(), cells.end()) ==
          realize_block(l, *default_shape(), catalog.block(probe)));
}

TEST_CASE("solution files round trip") {
    const Landscape l = synthetic_landscape(100, 100, 0.35);
    const Solution s = random_solution(l, default_shape(), 0.05, 3);
    std::stringstream buf;
    write_solution(buf, l, s);
    CHECK(read_solution(buf, l) == s);

    const Solution scattered = scattered_solution(l, 0.002, 3);
    std::stringstream buf2;
    write_solution(buf2, l, scattered);
    CHECK(read_solution(buf2, l) == scattered);

    std::stringstream wrong;
    write_solution(wrong, l, s);
    CHECK_THROWS_AS(read_solution(wrong, l, testing::ring_shape()), ValidationError);

    std::istringstream bad_header("row,col\n1,2\n");
    CHECK_THROWS_AS(read_solution(bad_header, l), FormatError);
    std::istringstream bad_orientation("anchor_row,anchor_col,orientation\n1,2,45\n");
    CHECK_THROWS_AS(read_solution(bad_orientation, l), FormatError);
    std::istringstream off_grid("anchor_row,anchor_col,orientation\n99,99,0\n");
    CHECK_THROWS_AS(read_solution(off_grid, l), PlacementError);
}

TEST_CASE("treated raster marks exactly the treated cells") {
    const Landscape l = synthetic_landscape(50, 40, 0.35);
    const Solution s = random_solution(l, default_shape(), 0.1, 2);
    const AsciiGrid g = treated_raster(l, s);
    CHECK(g.ncols == 50);
    CHECK(g.nrows == 40);
    double total = 0.0;
    for (double v : g.values) {
        total += v;
    }
    CHECK(total == static_cast<double>(s.treated_count()));
    for (CellIndex j : s.cells()) {
        CHECK(g.values[j] == 1.0);
    }
}

TEST_CASE("shape files") {
    std::istringstream in("# a small L\n0,0\n1,0\n\n1,1\n");
    const BlockShape ell = BlockShape::read(in, "ell");
    CHECK(ell.size() == 3);
    std::istringstream dup("0,0\n0,0\n");
    CHECK_THROWS(BlockShape::read(dup, "dup"));
    std::istringstream empty("# nothing\n");
    CHECK_THROWS(BlockShape::read(empty, "empty"));
}

TEST_CASE("solution ids follow the treated cells") {
    const Landscape l = synthetic_landscape(100, 100, 0.35);
    const Solution a = random_solution(l, default_shape(), 0.05, 1);
    CHECK(a.id().size() == 16);
    CHECK(a.id() == random_solution(l, default_shape(), 0.05, 1).id());
    CHECK(a.id() != random_solution(l, default_shape(), 0.05, 2).id());
}
