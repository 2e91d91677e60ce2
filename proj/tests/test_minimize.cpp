#include <doctest.h>

#include "skg/render.hpp"
#include "skg/smoothing.hpp"
#include "testutil.hpp"

using namespace skg;
using namespace skgtest;

namespace {

ContourGraph smoothed_graph(const Bitmap& b, double w = 1.0) {
    return smooth(build_graph(Skeleton{b, w}),
                  SmoothingParams::defaults(w, SmoothMode::lossless));
}

size_t total_steps(const ContourGraph& g) {
    size_t s = 0;
    for (const Branch& b : g.branches) s += b.chain.size();
    return s;
}
size_t total_steps(const MinimizedGraph& m) {
    size_t s = 0;
    for (const MinBranch& b : m.branches) s += b.chain.size();
    return s;
}

void eq2_counts(const ContourGraph& g, long long& n1, long long& n3) {
    n1 = n3 = 0;
    for (const Node& n : g.nodes) {
        if (n.loop_start) continue;
        if (n.index == 1) ++n1;
        if (n.index == 3) ++n3;
    }
}

} // namespace

TEST_CASE("minimize a straight segment") {
    Bitmap b(16, 5);
    for (int x = 3; x < 13; ++x) b.set(x, 2, 1);
    MinimizedGraph m = minimize(smoothed_graph(b));
    CHECK(m.anchors.size() == 1);
    CHECK(m.anchors[0].index == 1);
    CHECK(m.branches.size() == 1);
    CHECK(m.branches[0].chain.size() == 9);
    CHECK(verify_counts(m).consistent);
}

TEST_CASE("minimize a Y junction") {
    // one junction, three leaves, 15 foreground pixels
    Bitmap b = parse_ascii(
        {
            "    #    ",
            "    #    ",
            "    #    ",
            "    #    ",
            "   # #   ",
            "  #   #  ",
            " #     # ",
        },
        9);
    CHECK(b.foreground_count() == 10);
    ContourGraph g = smoothed_graph(b);
    MinimizedGraph m = minimize(g);
    CHECK(m.anchors.size() == 1);
    CHECK(m.anchors[0].index == 3);
    CHECK(m.branches.size() == 3);
    CHECK(verify_counts(m).consistent);
    CHECK(rasterize_skeleton(m) == b);
}

TEST_CASE("minimize the committed digit-pair raster") {
    Bitmap b = fig2_raster();
    ContourGraph g = smoothed_graph(b);
    CHECK(g.nodes.size() == 6);
    CHECK(g.branches.size() == 4);
    MinimizedGraph m = minimize(g);
    CHECK(m.anchors.size() == 2);
    CHECK(m.branches.size() == 4);
    CHECK(m.anchors[0].index == 3); // the junction
    CHECK(m.anchors[1].index == 1); // the dash start
    CountReport r = verify_counts(m);
    CHECK(r.consistent);
    CHECK(r.observed == 4);
    CHECK(r.n1_min == 5);
    CHECK(r.n3_min == 1);
    CHECK(r.n_loops == 0);
    CHECK(rasterize_skeleton(m) == b);
}

TEST_CASE("minimize a ring") {
    Bitmap b(9, 9);
    b.set(4, 2, 1);
    b.set(5, 3, 1);
    b.set(6, 4, 1);
    b.set(5, 5, 1);
    b.set(4, 6, 1);
    b.set(3, 5, 1);
    b.set(2, 4, 1);
    b.set(3, 3, 1);
    MinimizedGraph m = minimize(smoothed_graph(b));
    CHECK(m.anchors.size() == 1);
    CHECK(m.branches.size() == 1);
    CHECK(m.n_loops == 1);
    CountReport r = verify_counts(m);
    CHECK(r.consistent);
    CHECK(r.n_loops == 1);
    CHECK(rasterize_skeleton(m) == b);
}

TEST_CASE("minimize rejects crossings") {
    Bitmap b(11, 11);
    for (int i = -4; i <= 4; ++i) {
        b.set(5 + i, 5 + i, 1);
        b.set(5 + i, 5 - i, 1);
    }
    ContourGraph raw = build_graph(Skeleton{b, 1.0});
    CHECK_THROWS_AS(minimize(raw), Error);
    try {
        minimize(raw);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unsmoothed_input);
    }
}

TEST_CASE("branch_count formula") {
    CHECK(branch_count(2, 0, 0) == 1);
    CHECK(branch_count(0, 0, 1) == 1);
    CHECK(branch_count(3, 1, 0) == 3);
    CHECK(branch_count(5, 1, 0) == 4);
    CHECK_THROWS_AS(branch_count(1, 0, 0), Error);
}

TEST_CASE("branch_count matches traced branches on one-junction shapes") {
    // brute-force oracle for n1=3, n3=1: Y shapes with differently bent arms
    std::vector<Bitmap> shapes;
    shapes.push_back(parse_ascii({"  #  ", "  #  ", " # # ", "#   #"}, 5));
    shapes.push_back(parse_ascii({"#   #", " # # ", "  #  ", "  #  ", "  #  "}, 5));
    shapes.push_back(parse_ascii({"   #   ", "   #   ", "  # #  ", " #   # ", "#     #"}, 7));
    for (size_t i = 0; i < shapes.size(); ++i) {
        CAPTURE(i);
        ContourGraph g = smoothed_graph(shapes[i]);
        long long n1, n3;
        eq2_counts(g, n1, n3);
        CHECK(n1 == 3);
        CHECK(n3 == 1);
        CHECK(static_cast<long long>(g.branches.size()) == branch_count(n1, n3, g.n_loops));
        CHECK(branch_count(3, 1, 0) == 3);
    }
}

TEST_CASE("verify_counts on the empty graph") {
    MinimizedGraph empty;
    empty.width = 8;
    empty.height = 8;
    CountReport r = verify_counts(empty);
    CHECK(r.consistent);
    CHECK(r.observed == 0);
    CHECK(r.predicted == 0);
    CHECK(r.n1_min == 0);
    CHECK(r.n3_min == 0);
    std::string j = r.to_json();
    CHECK(j.find("\"consistent\":true") != std::string::npos);
}

TEST_CASE("branch-count laws hold across random skeletons") {
    for (uint32_t seed = 0; seed < 60; ++seed) {
        Bitmap src = random_strokes(72, 72, 2 + seed % 4, 5000 + seed);
        Skeleton sk = thin(src);
        ContourGraph g = smooth(build_graph(sk),
                                SmoothingParams::defaults(sk.avg_line_width, SmoothMode::lossless));
        CAPTURE(seed);

        long long n1, n3;
        eq2_counts(g, n1, n3);
        CHECK(static_cast<long long>(g.branches.size()) == branch_count(n1, n3, g.n_loops));

        MinimizedGraph m = minimize(g);
        CHECK(verify_counts(m).consistent);

        // coverage: every input branch walked exactly once
        CHECK(total_steps(m) == total_steps(g));
        // geometry preservation
        CHECK(rasterize_skeleton(m) == sk.grid);
        // anchors never exceed input nodes
        CHECK(m.anchors.size() <= g.nodes.size());
    }
}
