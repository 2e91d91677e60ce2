#ifndef SKG_TESTUTIL_HPP
#define SKG_TESTUTIL_HPP

#include <cmath>
#include <deque>
#include <random>
#include <set>

#include "skg/bitmap.hpp"

namespace skgtest {

inline void draw_disc(skg::Bitmap& b, double cx, double cy, double r) {
    int x0 = static_cast<int>(std::floor(cx - r)), x1 = static_cast<int>(std::ceil(cx + r));
    int y0 = static_cast<int>(std::floor(cy - r)), y1 = static_cast<int>(std::ceil(cy + r));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            if (!b.in_bounds(x, y)) continue;
            double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) b.set(x, y, 1);
        }
}

inline void draw_stroke(skg::Bitmap& b, double x0, double y0, double x1, double y1, double width) {
    double len = std::hypot(x1 - x0, y1 - y0);
    int steps = std::max(1, static_cast<int>(std::ceil(len * 2)));
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        draw_disc(b, x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, width / 2.0);
    }
}

// Smooth random pen strokes: momentum walk with slowly drifting curvature.
inline skg::Bitmap random_strokes(int w, int h, int n_strokes, uint32_t seed,
                                  double width_lo = 2.0, double width_hi = 4.5) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(w * 0.1, w * 0.9);
    std::uniform_real_distribution<double> uy(h * 0.1, h * 0.9);
    std::uniform_real_distribution<double> uang(0, 2 * M_PI);
    std::uniform_real_distribution<double> ucurv(-0.25, 0.25);
    std::uniform_real_distribution<double> uwid(width_lo, width_hi);
    std::uniform_int_distribution<int> ulen(std::min(w, h) / 3, std::min(w, h) * 2);

    skg::Bitmap b(w, h);
    for (int s = 0; s < n_strokes; ++s) {
        double x = ux(rng), y = uy(rng);
        double ang = uang(rng);
        double curv = ucurv(rng) * 0.2;
        double wid = uwid(rng);
        int len = ulen(rng);
        for (int i = 0; i < len; ++i) {
            draw_disc(b, x, y, wid / 2.0);
            x += std::cos(ang);
            y += std::sin(ang);
            ang += curv;
            curv += ucurv(rng) * 0.05;
            curv = std::clamp(curv, -0.2, 0.2);
            if (x < 2 || x > w - 3 || y < 2 || y > h - 3) break;
        }
    }
    return b;
}

// Arbitrary messy foreground: discs, bars and strokes unioned.
inline skg::Bitmap random_blob(int w, int h, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(2, w - 3), uy(2, h - 3);
    std::uniform_real_distribution<double> ur(1.0, std::min(w, h) / 6.0);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> count(2, 6);
    skg::Bitmap b(w, h);
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
            case 0:
                draw_disc(b, ux(rng), uy(rng), ur(rng));
                break;
            case 1:
                draw_stroke(b, ux(rng), uy(rng), ux(rng), uy(rng), ur(rng));
                break;
            default: {
                double cx = ux(rng), cy = uy(rng), r = ur(rng);
                for (double a = 0; a < 2 * M_PI; a += 0.05)
                    draw_disc(b, cx + r * std::cos(a), cy + r * std::sin(a), 1.5);
                break;
            }
        }
    }
    return b;
}

// Test-side oracle: 8-connected foreground component count by flood fill.
inline size_t count_components(const skg::Bitmap& g) {
    std::vector<char> seen(g.pixels.size(), 0);
    size_t n = 0;
    std::deque<std::pair<int, int>> q;
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            size_t p = static_cast<size_t>(y) * g.width + x;
            if (!g.pixels[p] || seen[p]) continue;
            ++n;
            seen[p] = 1;
            q.push_back({x, y});
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop_front();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = cx + dx, ny = cy + dy;
                        if (!g.in_bounds(nx, ny) || !g.at(nx, ny)) continue;
                        size_t np = static_cast<size_t>(ny) * g.width + nx;
                        if (!seen[np]) {
                            seen[np] = 1;
                            q.push_back({nx, ny});
                        }
                    }
            }
        }
    return n;
}

inline bool has_full_2x2_block(const skg::Bitmap& g) {
    for (int y = 0; y + 1 < g.height; ++y)
        for (int x = 0; x + 1 < g.width; ++x)
            if (g.at(x, y) && g.at(x + 1, y) && g.at(x, y + 1) && g.at(x + 1, y + 1)) return true;
    return false;
}

inline bool subset_of(const skg::Bitmap& a, const skg::Bitmap& b) {
    if (a.width != b.width || a.height != b.height) return false;
    for (size_t i = 0; i < a.pixels.size(); ++i)
        if (a.pixels[i] && !b.pixels[i]) return false;
    return true;
}

// '#' = ink, anything else background; lines may have ragged lengths.
inline skg::Bitmap parse_ascii(const std::vector<std::string>& rows, int width) {
    skg::Bitmap b(width, static_cast<int>(rows.size()));
    for (size_t y = 0; y < rows.size(); ++y)
        for (size_t x = 0; x < rows[y].size() && x < static_cast<size_t>(width); ++x)
            if (rows[y][x] == '#') b.set(static_cast<int>(x), static_cast<int>(y), 1);
    return b;
}

// The committed digit-pair raster: a Y-shaped glyph (one junction, three
// strokes) next to a dash. Already one pixel wide and stable under
// thinning. Raw graph: 6 nodes, 4 branches; minimized: 2 anchors, 4
// branches.
inline skg::Bitmap fig2_raster() {
    return parse_ascii(
        {
            "                     ",
            "                     ",
            "                     ",
            "                     ",
            "          #          ",
            "          #          ",
            "          #          ",
            "          #          ",
            "          #          ",
            "         # #         ",
            "        #   #        ",
            "       #     #       ",
            "                     ",
            "                     ",
            "    #############    ",
            "                     ",
            "                     ",
        },
        21);
}

} // namespace skgtest

#endif
