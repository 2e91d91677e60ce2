#include <doctest.h>

#include <random>

#include "skg/codec.hpp"
#include "skg/render.hpp"
#include "skg/smoothing.hpp"
#include "testutil.hpp"

using namespace skg;
using namespace skgtest;

namespace {

MinimizedGraph pipeline(const Bitmap& b, SmoothMode mode = SmoothMode::lossless) {
    Skeleton sk = thin(b);
    ContourGraph g = smooth(build_graph(sk), SmoothingParams::defaults(sk.avg_line_width, mode));
    MinimizedGraph m = minimize(g);
    m.avg_line_width = quantize_width(m.avg_line_width);
    return m;
}

} // namespace

TEST_CASE("relativize and replay") {
    CHECK(relativize({0, 0, 0, 0}) == RelativeChain{0, {0, 0, 0}});
    CHECK(relativize({0, 1, 2, 3}) == RelativeChain{0, {1, 1, 1}});
    CHECK(relativize({2, 1, 2, 2, 3}) == RelativeChain{2, {-1, 1, 0, 1}});
    CHECK_THROWS_AS(relativize({0, 2}), Error);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint8_t> chain;
        int d = static_cast<int>(rng() % 8);
        chain.push_back(static_cast<uint8_t>(d));
        for (int i = 0; i < 50; ++i) {
            d = (d + static_cast<int>(rng() % 3) - 1 + 8) & 7;
            chain.push_back(static_cast<uint8_t>(d));
        }
        CHECK(replay(relativize(chain)) == chain);
    }
}

TEST_CASE("rle runs cap at 64") {
    std::vector<int8_t> turns(100, 0);
    auto tokens = rle_encode(turns);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == RleToken{0, 64});
    CHECK(tokens[1] == RleToken{0, 36});
    CHECK(rle_encode({}).empty());
    CHECK_THROWS_AS(rle_decode({RleToken{0, 0}}), Error);

    std::mt19937 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int8_t> t(rng() % 120);
        for (auto& v : t) v = static_cast<int8_t>(static_cast<int>(rng() % 3) - 1);
        CHECK(rle_decode(rle_encode(t)) == t);
    }
}

TEST_CASE("pack writes one byte per token") {
    CHECK(pack({RleToken{0, 64}}) == std::vector<uint8_t>{0b01111111});
    CHECK(pack({}).empty());

    // adversarial alternation: one token per turn, still only L bytes
    std::vector<int8_t> alt;
    for (int i = 0; i < 200; ++i) alt.push_back(i % 2 ? 1 : -1);
    auto bytes = pack(rle_encode(alt));
    CHECK(bytes.size() == alt.size());

    auto tokens = unpack(bytes, alt.size());
    CHECK(rle_decode(tokens) == alt);

    CHECK_THROWS_AS(unpack(std::span<const uint8_t>(bytes.data(), 3), 200), Error);
    std::vector<uint8_t> bad = {0xFF}; // symbol code 11
    CHECK_THROWS_AS(unpack(std::span<const uint8_t>(bad.data(), 1), 1), Error);
}

TEST_CASE("base3 packing is exact and tight") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<int8_t> t(rng() % 700);
        for (auto& v : t) v = static_cast<int8_t>(static_cast<int>(rng() % 3) - 1);
        auto bytes = pack_base3(t);
        CHECK(unpack_base3(std::span<const uint8_t>(bytes.data(), bytes.size()), t.size()) == t);
        // ceil(T*log2(3)) + 7 bits is the framing bound
        double bound = std::ceil(static_cast<double>(t.size()) * std::log2(3.0)) + 7.0;
        CHECK(static_cast<double>(bytes.size() * 8) <= bound);
    }
}

TEST_CASE("encode of the empty graph is the 17-byte header") {
    MinimizedGraph m;
    m.width = 64;
    m.height = 48;
    m.avg_line_width = 1.0;
    auto bytes = encode(m);
    CHECK(bytes.size() == 17);
    CHECK(bytes[0] == 'S');
    CHECK(bytes[1] == 'K');
    CHECK(bytes[2] == 'G');
    CHECK(bytes[3] == '1');
    CHECK(bytes[4] == 1);
    MinimizedGraph back = decode(bytes);
    CHECK(back == m);
}

TEST_CASE("single straight branch stays within the size budget") {
    Bitmap b(110, 5);
    for (int x = 3; x < 103; ++x) b.set(x, 2, 1);
    MinimizedGraph m = pipeline(b);
    REQUIRE(m.branches.size() == 1);
    CHECK(m.branches[0].chain.size() == 99);
    auto bytes = encode(m);
    // header + one anchor + branch descriptor + two rle tokens
    CHECK(bytes.size() <= 17 + 5 + 8 + 2);
    CHECK(decode(bytes) == m);
}

TEST_CASE("encode is deterministic and round trips") {
    for (uint32_t seed = 0; seed < 40; ++seed) {
        Bitmap src = random_strokes(96, 96, 2 + seed % 3, 6000 + seed);
        MinimizedGraph m = pipeline(src);
        CAPTURE(seed);
        auto bytes = encode(m);
        CHECK(encode(m) == bytes);
        CHECK(decode(bytes) == m);
        auto b3 = encode(m, Packing::base3);
        CHECK(decode(b3) == m);
    }
}

TEST_CASE("sharp turns split branches and decode sews them back") {
    MinimizedGraph m;
    m.width = 32;
    m.height = 32;
    m.avg_line_width = 1.0;
    m.anchors.push_back({0, 4, 4, 1});
    // east 5 steps, then an abrupt 90-degree climb
    m.branches.push_back({0, 0, {0, 0, 0, 0, 0, 2, 2, 2}});
    auto bytes = encode(m);
    // container carries one synthetic seam anchor
    CHECK(bytes[11] == 2); // anchor count low byte
    CHECK(bytes[13] == 2); // branch count low byte
    MinimizedGraph back = decode(bytes);
    CHECK(back == m);
}

TEST_CASE("decode rejects the specified corruption classes") {
    MinimizedGraph m = pipeline(fig2_raster());
    auto good = encode(m);
    CHECK(decode(good) == m);

    auto expect_code = [](std::vector<uint8_t> bytes, Errc want) {
        try {
            decode(bytes);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == want);
        }
    };

    auto bad_magic = good;
    bad_magic[0] = 'X';
    expect_code(bad_magic, Errc::bad_magic);

    auto bad_version = good;
    bad_version[4] = 9;
    expect_code(bad_version, Errc::version_unsupported);

    auto truncated = good;
    truncated.resize(truncated.size() - 3);
    expect_code(truncated, Errc::truncated);

    auto bad_loops = good;
    bad_loops[15] = static_cast<uint8_t>(bad_loops[15] + 1); // n_loops low byte
    expect_code(bad_loops, Errc::count_mismatch);

    auto trailing = good;
    trailing.push_back(0);
    expect_code(trailing, Errc::count_mismatch);
}

TEST_CASE("encode rejects oversized tables and dimensions") {
    MinimizedGraph wide;
    wide.width = 70000;
    wide.height = 8;
    try {
        encode(wide);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::too_large);
    }

    MinimizedGraph crowd;
    crowd.width = 300;
    crowd.height = 300;
    for (int i = 0; i < 70000; ++i)
        crowd.anchors.push_back({i, i % 300, (i / 300) % 300, 0});
    try {
        encode(crowd);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::too_large);
    }
}

TEST_CASE("quantize_width is 1/256 fixed point") {
    CHECK(quantize_width(1.0) == 1.0);
    CHECK(quantize_width(3.14159) == doctest::Approx(3.140625).epsilon(1e-9));
    CHECK(std::abs(quantize_width(2.71828) - 2.71828) <= 1.0 / 512.0 + 1e-12);
}
