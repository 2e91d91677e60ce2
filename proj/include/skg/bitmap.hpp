#ifndef SKG_BITMAP_HPP
#define SKG_BITMAP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skg/error.hpp"

namespace skg {

// Binary raster, row-major, 1 = ink (PBM "black"), 0 = background.
// dpi is carried as metadata only; no stage rescales by it and it is
// excluded from equality.
struct Bitmap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels; // width*height values, each 0 or 1
    std::optional<int> dpi;

    Bitmap() = default;
    Bitmap(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h, 0) {}

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, uint8_t v) { pixels[static_cast<size_t>(y) * width + x] = v; }
    // Out-of-image pixels read as background.
    uint8_t get_or0(int x, int y) const { return in_bounds(x, y) ? at(x, y) : 0; }

    size_t foreground_count() const;
    bool empty_foreground() const { return foreground_count() == 0; }

    friend bool operator==(const Bitmap& a, const Bitmap& b) {
        return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
    }
};

// Parses PBM, magic P1 (ASCII) or P4 (packed, MSB-first, byte-padded rows).
// Comments (#...) are accepted wherever header whitespace is.
Bitmap load_pbm(std::span<const uint8_t> bytes);
Bitmap load_pbm(const std::vector<uint8_t>& bytes);

// Emits P4 with header "P4\n<w> <h>\n", rows padded to a byte boundary.
std::vector<uint8_t> save_pbm(const Bitmap& b);

// 1 iff intensity < threshold (dark ink on light paper).
Bitmap binarize(std::span<const uint8_t> gray, int width, int height, int threshold);

// Packed size of the raster at 1 bpp, ceil(w*h/8). This is the byte count
// the CLI reports as in_bytes for compression ratios.
size_t packed_raster_bytes(const Bitmap& b);

} // namespace skg

#endif
