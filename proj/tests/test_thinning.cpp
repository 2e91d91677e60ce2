#include <doctest.h>

#include "skg/thinning.hpp"
#include "testutil.hpp"

using namespace skg;
using namespace skgtest;

TEST_CASE("thin of empty image is empty with width 1") {
    Skeleton s = thin(Bitmap(16, 16));
    CHECK(s.grid.foreground_count() == 0);
    CHECK(s.avg_line_width == 1.0);
}

TEST_CASE("thin keeps a one-pixel line unchanged") {
    Bitmap b(30, 7);
    for (int x = 4; x < 24; ++x) b.set(x, 3, 1);
    Skeleton s = thin(b);
    CHECK(s.grid == b);
    CHECK(s.avg_line_width == 1.0);
}

TEST_CASE("thin reduces a 3x20 bar to its middle row") {
    Bitmap b(26, 9);
    for (int y = 3; y < 6; ++y)
        for (int x = 3; x < 23; ++x) b.set(x, y, 1);
    Skeleton s = thin(b);
    size_t len = s.grid.foreground_count();
    CHECK(len >= 18);
    CHECK(len <= 20);
    CHECK(s.avg_line_width == doctest::Approx(3.0).epsilon(0.17));
    CHECK(subset_of(s.grid, b));
    CHECK(count_components(s.grid) == 1);
}

TEST_CASE("measure_line_width is the area ratio") {
    Bitmap src(30, 10);
    for (int y = 2; y < 7; ++y)
        for (int x = 5; x < 25; ++x) src.set(x, y, 1);
    Bitmap skel(30, 10);
    for (int x = 5; x < 25; ++x) skel.set(x, 4, 1);
    CHECK(measure_line_width(src, skel) == doctest::Approx(5.0));
    CHECK(measure_line_width(src, src) == doctest::Approx(1.0));
    CHECK(measure_line_width(src, Bitmap(30, 10)) == 1.0);
}

TEST_CASE("disc width measurement regression pin") {
    Bitmap b(20, 20);
    draw_disc(b, 9.5, 9.5, 6.0);
    // Oracle by enumeration: 112 disc pixels, 7 residue pixels after
    // thinning (a disc has no elongated structure to keep).
    CHECK(b.foreground_count() == 112);
    Skeleton s = thin(b);
    CHECK(s.grid.foreground_count() == 7);
    CHECK(measure_line_width(b, s.grid) == doctest::Approx(16.0));
}

TEST_CASE("thinning properties hold on random blobs") {
    for (uint32_t seed = 0; seed < 40; ++seed) {
        Bitmap b = random_blob(48 + static_cast<int>(seed % 3) * 20,
                               40 + static_cast<int>(seed % 5) * 12, 1000 + seed);
        Skeleton s = thin(b);
        CAPTURE(seed);
        CHECK(subset_of(s.grid, b));
        CHECK(count_components(s.grid) == count_components(b));
        CHECK(!has_full_2x2_block(s.grid));
        Skeleton again = thin(s.grid);
        CHECK(again.grid == s.grid);
    }
}

TEST_CASE("serial and parallel thinning agree") {
    for (uint32_t seed = 50; seed < 58; ++seed) {
        Bitmap b = random_blob(64, 64, seed);
        CHECK(thin(b, Exec::serial).grid == thin(b, Exec::parallel).grid);
    }
}
