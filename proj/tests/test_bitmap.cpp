#include <doctest.h>

#include <random>

#include "skg/bitmap.hpp"
#include "testutil.hpp"

using namespace skg;

TEST_CASE("load_pbm parses P1") {
    std::string s = "P1\n2 2\n1 0\n0 1\n";
    Bitmap b = load_pbm(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    CHECK(b.width == 2);
    CHECK(b.height == 2);
    CHECK(b.pixels == std::vector<uint8_t>{1, 0, 0, 1});
}

TEST_CASE("load_pbm parses P1 without separators and with comments") {
    std::string s = "P1\n# glyph\n2 2\n1001\n";
    Bitmap b = load_pbm(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    CHECK(b.pixels == std::vector<uint8_t>{1, 0, 0, 1});
}

TEST_CASE("load_pbm P4 unpacks MSB-first with row padding discarded") {
    std::vector<uint8_t> s = {'P', '4', '\n', '9', ' ', '1', '\n', 0xFF, 0x80};
    Bitmap b = load_pbm(s);
    CHECK(b.width == 9);
    CHECK(b.height == 1);
    for (int x = 0; x < 9; ++x) CHECK(b.at(x, 0) == 1);
}

TEST_CASE("save_pbm emits bit-exact P4") {
    Bitmap one(1, 1);
    one.set(0, 0, 1);
    std::vector<uint8_t> expect = {'P', '4', '\n', '1', ' ', '1', '\n', 0x80};
    CHECK(save_pbm(one) == expect);

    Bitmap row(8, 1);
    for (int x = 0; x < 8; ++x) row.set(x, 0, 1);
    auto bytes = save_pbm(row);
    CHECK(bytes.back() == 0xFF);
}

TEST_CASE("pbm round trip on random bitmaps") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int w = 1 + static_cast<int>(rng() % 64);
        int h = 1 + static_cast<int>(rng() % 64);
        Bitmap b(w, h);
        for (auto& p : b.pixels) p = rng() & 1;
        CHECK(load_pbm(save_pbm(b)) == b);
    }
}

TEST_CASE("load_pbm error classes") {
    auto code_of = [](const std::string& s) {
        try {
            load_pbm(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::invalid_argument;
    };
    CHECK(code_of("P5\n1 1\n\x01") == Errc::unsupported_magic);
    CHECK(code_of("P1\nx") == Errc::malformed_header);
    CHECK(code_of("P1\n2 2\n1 0 1") == Errc::truncated);
    CHECK(code_of(std::string("P4\n9 2\n\xff\x80", 9)) == Errc::truncated);
}

TEST_CASE("binarize thresholds dark ink") {
    std::vector<uint8_t> white(16, 255), black(16, 0);
    CHECK(binarize(white, 4, 4, 128).foreground_count() == 0);
    CHECK(binarize(black, 4, 4, 128).foreground_count() == 16);

    // 16x16 ramp holds each intensity exactly once.
    std::vector<uint8_t> ramp(256);
    for (int i = 0; i < 256; ++i) ramp[i] = static_cast<uint8_t>(i);
    CHECK(binarize(ramp, 16, 16, 128).foreground_count() == 128);

    CHECK_THROWS_AS(binarize(ramp, 3, 3, 128), Error);
}

TEST_CASE("binarize is monotone in threshold") {
    std::mt19937 rng(11);
    std::vector<uint8_t> gray(64);
    for (auto& g : gray) g = static_cast<uint8_t>(rng() % 256);
    for (int t = 0; t < 255; ++t) {
        Bitmap lo = binarize(gray, 8, 8, t);
        Bitmap hi = binarize(gray, 8, 8, t + 1);
        CHECK(skgtest::subset_of(lo, hi));
    }
}
