#include "skg/bitmap.hpp"

#include <algorithm>
#include <string>

namespace skg {

size_t Bitmap::foreground_count() const {
    size_t n = 0;
    for (uint8_t p : pixels) n += p;
    return n;
}

namespace {

struct Cursor {
    std::span<const uint8_t> data;
    size_t pos = 0;

    bool eof() const { return pos >= data.size(); }
    uint8_t peek() const { return data[pos]; }
    uint8_t take() { return data[pos++]; }
};

bool is_ws(uint8_t c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Skips whitespace and '#' comments (to end of line).
void skip_ws_comments(Cursor& c) {
    while (!c.eof()) {
        if (is_ws(c.peek())) {
            c.take();
        } else if (c.peek() == '#') {
            while (!c.eof() && c.take() != '\n') {}
        } else {
            return;
        }
    }
}

int parse_uint(Cursor& c, const char* what) {
    skip_ws_comments(c);
    if (c.eof() || c.peek() < '0' || c.peek() > '9')
        fail(Errc::malformed_header, std::string("pbm: expected ") + what);
    long v = 0;
    while (!c.eof() && c.peek() >= '0' && c.peek() <= '9') {
        v = v * 10 + (c.take() - '0');
        if (v > 1000000) fail(Errc::malformed_header, std::string("pbm: ") + what + " too large");
    }
    return static_cast<int>(v);
}

} // namespace

Bitmap load_pbm(std::span<const uint8_t> bytes) {
    Cursor c{bytes};
    if (bytes.size() < 2) fail(Errc::malformed_header, "pbm: stream too short");
    char m0 = static_cast<char>(c.take());
    char m1 = static_cast<char>(c.take());
    if (m0 != 'P' || (m1 != '1' && m1 != '4'))
        fail(Errc::unsupported_magic, "pbm: magic must be P1 or P4");

    int w = parse_uint(c, "width");
    int h = parse_uint(c, "height");
    if (w <= 0 || h <= 0) fail(Errc::malformed_header, "pbm: non-positive dimensions");

    Bitmap b(w, h);
    if (m1 == '1') {
        size_t n = static_cast<size_t>(w) * h;
        for (size_t i = 0; i < n; ++i) {
            skip_ws_comments(c);
            if (c.eof()) fail(Errc::truncated, "pbm: P1 payload truncated");
            uint8_t ch = c.take();
            if (ch != '0' && ch != '1') fail(Errc::truncated, "pbm: P1 payload has non-bit character");
            b.pixels[i] = static_cast<uint8_t>(ch - '0');
        }
    } else {
        // P4: exactly one whitespace byte after the header, then packed rows.
        if (c.eof() || !is_ws(c.peek())) fail(Errc::malformed_header, "pbm: P4 header not terminated");
        c.take();
        size_t row_bytes = (static_cast<size_t>(w) + 7) / 8;
        if (bytes.size() - c.pos < row_bytes * h) fail(Errc::truncated, "pbm: P4 payload truncated");
        for (int y = 0; y < h; ++y) {
            const uint8_t* row = bytes.data() + c.pos + static_cast<size_t>(y) * row_bytes;
            for (int x = 0; x < w; ++x)
                b.set(x, y, (row[x >> 3] >> (7 - (x & 7))) & 1);
        }
    }
    return b;
}

Bitmap load_pbm(const std::vector<uint8_t>& bytes) {
    return load_pbm(std::span<const uint8_t>(bytes.data(), bytes.size()));
}

std::vector<uint8_t> save_pbm(const Bitmap& b) {
    std::string header = "P4\n" + std::to_string(b.width) + " " + std::to_string(b.height) + "\n";
    size_t row_bytes = (static_cast<size_t>(b.width) + 7) / 8;
    std::vector<uint8_t> out(header.begin(), header.end());
    out.resize(header.size() + row_bytes * b.height, 0);
    uint8_t* payload = out.data() + header.size();
    for (int y = 0; y < b.height; ++y) {
        uint8_t* row = payload + static_cast<size_t>(y) * row_bytes;
        for (int x = 0; x < b.width; ++x)
            if (b.at(x, y)) row[x >> 3] |= static_cast<uint8_t>(0x80 >> (x & 7));
    }
    return out;
}

Bitmap binarize(std::span<const uint8_t> gray, int width, int height, int threshold) {
    if (width <= 0 || height <= 0 || gray.size() != static_cast<size_t>(width) * height)
        fail(Errc::dimension_mismatch, "binarize: buffer size != width*height");
    Bitmap b(width, height);
    for (size_t i = 0; i < gray.size(); ++i)
        b.pixels[i] = gray[i] < threshold ? 1 : 0;
    return b;
}

size_t packed_raster_bytes(const Bitmap& b) {
    return (static_cast<size_t>(b.width) * b.height + 7) / 8;
}

} // namespace skg
