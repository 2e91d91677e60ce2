#include "skg/thinning.hpp"

#include <deque>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace skg {
namespace {

// Neighbor layout (y grows downward):
//   n3 n2 n1
//   n4  p n0
//   n5 n6 n7
struct Nbh {
    uint8_t n[8];
};

inline Nbh neighborhood(const Bitmap& g, int x, int y) {
    Nbh v;
    v.n[0] = g.get_or0(x + 1, y);
    v.n[1] = g.get_or0(x + 1, y - 1);
    v.n[2] = g.get_or0(x, y - 1);
    v.n[3] = g.get_or0(x - 1, y - 1);
    v.n[4] = g.get_or0(x - 1, y);
    v.n[5] = g.get_or0(x - 1, y + 1);
    v.n[6] = g.get_or0(x, y + 1);
    v.n[7] = g.get_or0(x + 1, y + 1);
    return v;
}

// Edge-point deletability per exposed side. A point survives when deleting
// it would break a diagonal connection or shorten a stroke end.
inline bool deletable(const Nbh& v, int dir) {
    const uint8_t* n = v.n;
    switch (dir) {
        case 0: // north edge: n2 == 0
            return !n[2] && n[6] && (n[7] | n[0] | n[4] | n[5]) && (n[0] | !n[1]) && (n[4] | !n[3]);
        case 1: // south edge: n6 == 0
            return !n[6] && n[2] && (n[3] | n[4] | n[0] | n[1]) && (n[4] | !n[5]) && (n[0] | !n[7]);
        case 2: // east edge: n0 == 0
            return !n[0] && n[4] && (n[5] | n[6] | n[2] | n[3]) && (n[6] | !n[7]) && (n[2] | !n[1]);
        default: // west edge: n4 == 0
            return !n[4] && n[0] && (n[1] | n[2] | n[6] | n[7]) && (n[2] | !n[3]) && (n[6] | !n[5]);
    }
}

size_t flag_row(const Bitmap& g, int y, int dir, uint8_t* flag_row_ptr) {
    size_t count = 0;
    const int w = g.width;
    for (int x = 0; x < w; ++x) {
        flag_row_ptr[x] = 0;
        if (!g.at(x, y)) continue;
        if (deletable(neighborhood(g, x, y), dir)) {
            flag_row_ptr[x] = 1;
            ++count;
        }
    }
    return count;
}

// Local simple-point test for 8-connected foreground: the dark neighbors
// form a single 8-connected component within the punctured 3x3 window and
// the pixel has a white 4-neighbor. Endpoints (<2 neighbors) never qualify.
bool simple_point(const Bitmap& g, int x, int y) {
    Nbh v = neighborhood(g, x, y);
    int dark = 0;
    for (int i = 0; i < 8; ++i) dark += v.n[i];
    if (dark < 2) return false;
    if (v.n[0] && v.n[2] && v.n[4] && v.n[6]) return false; // interior, no white 4-neighbor

    // Ring adjacency: consecutive slots always touch, and orthogonal slots
    // two apart (E-N, N-W, W-S, S-E) touch diagonally.
    static constexpr int pairs[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6},
                                         {6, 7}, {7, 0}, {0, 2}, {2, 4}, {4, 6}, {6, 0}};
    int comp[8];
    for (int i = 0; i < 8; ++i) comp[i] = v.n[i] ? i : -1;
    bool merged = true;
    while (merged) {
        merged = false;
        for (auto& pr : pairs) {
            int a = comp[pr[0]], b = comp[pr[1]];
            if (a < 0 || b < 0 || a == b) continue;
            int lo = a < b ? a : b;
            for (int i = 0; i < 8; ++i)
                if (comp[i] == a || comp[i] == b) comp[i] = lo;
            merged = true;
        }
    }
    int components = 0;
    bool seen[8] = {};
    for (int i = 0; i < 8; ++i) {
        if (comp[i] < 0 || seen[comp[i]]) continue;
        seen[comp[i]] = true;
        ++components;
    }
    return components == 1;
}

// Sequential pass deleting every remaining simple point with two or more
// neighbors. Deleting a simple point never changes connectivity or holes
// and endpoints are excluded, so this only dissolves junction tangles and
// corner redundancy the directional passes cannot reach; (y,x) scan order
// keeps it deterministic.
void cleanup_simple_points(Bitmap& g) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < g.height; ++y)
            for (int x = 0; x < g.width; ++x) {
                if (!g.at(x, y)) continue;
                if (simple_point(g, x, y)) {
                    g.set(x, y, 0);
                    changed = true;
                }
            }
    }
}

// Two-thick diagonal weaves can lock: every pixel is either interior or
// locally load-bearing, yet a solid 2x2 block remains. Such pixels are
// globally redundant; prove it with an exact connectivity search over the
// component instead of the 3x3 window.
bool globally_safe_delete(const Bitmap& g, int x, int y) {
    struct P {
        int x, y;
    };
    std::vector<P> nbrs;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            if (!dx && !dy) continue;
            if (g.get_or0(x + dx, y + dy)) nbrs.push_back({x + dx, y + dy});
        }
    if (nbrs.size() < 2) return false; // endpoint
    if (g.get_or0(x + 1, y) && g.get_or0(x - 1, y) && g.get_or0(x, y + 1) && g.get_or0(x, y - 1))
        return false; // interior: deletion would punch a hole

    // Exhaustive search over the component; stops as soon as every neighbor
    // of the candidate is reached. Blocks are rare, so the worst case
    // (neighbors genuinely disconnected) stays cheap in aggregate.
    std::vector<char> seen(static_cast<size_t>(g.width) * g.height, 0);
    auto at = [&](int px, int py) -> char& { return seen[static_cast<size_t>(py) * g.width + px]; };
    std::deque<P> queue;
    at(nbrs[0].x, nbrs[0].y) = 1;
    queue.push_back(nbrs[0]);
    size_t found = 1;
    while (!queue.empty()) {
        P p = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (!dx && !dy) continue;
                int nx = p.x + dx, ny = p.y + dy;
                if ((nx == x && ny == y) || !g.get_or0(nx, ny)) continue;
                if (at(nx, ny)) continue;
                at(nx, ny) = 1;
                queue.push_back({nx, ny});
                for (const P& q : nbrs)
                    if (q.x == nx && q.y == ny) {
                        if (++found == nbrs.size()) return true;
                    }
            }
    }
    return found == nbrs.size();
}

// Flood of the component containing (sx, sy), excluding none.
std::vector<char> component_of(const Bitmap& g, int sx, int sy) {
    struct P {
        int x, y;
    };
    std::vector<char> seen(static_cast<size_t>(g.width) * g.height, 0);
    std::deque<P> queue;
    seen[static_cast<size_t>(sy) * g.width + sx] = 1;
    queue.push_back({sx, sy});
    while (!queue.empty()) {
        P p = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = p.x + dx, ny = p.y + dy;
                if (!g.get_or0(nx, ny)) continue;
                size_t k = static_cast<size_t>(ny) * g.width + nx;
                if (!seen[k]) {
                    seen[k] = 1;
                    queue.push_back({nx, ny});
                }
            }
    }
    return seen;
}

// A perfect diagonal crossing leaves an irreducible 2x2 core: every pixel
// carries one diagonal arm, so deletion alone must disconnect something.
// The skeleton is only required to stay inside the *source* foreground,
// so reroute: drop one core pixel and re-attach its stranded arm through a
// neighboring source pixel, provided the edit provably keeps the component
// whole and does not touch any other component.
bool reroute_block_pixel(Bitmap& g, const Bitmap& source, int x, int y) {
    std::vector<std::pair<int, int>> nbrs;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            if (!dx && !dy) continue;
            if (g.get_or0(x + dx, y + dy)) nbrs.emplace_back(x + dx, y + dy);
        }
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
            if (!dx && !dy) continue;
            int qx = x + dx, qy = y + dy;
            if (!g.in_bounds(qx, qy) || g.at(qx, qy)) continue;
            if (!source.at(qx, qy)) continue;

            g.set(x, y, 0);
            g.set(qx, qy, 1);
            bool ok = true;
            // no new solid block around the added pixel
            for (int oy = -1; oy <= 0 && ok; ++oy)
                for (int ox = -1; ox <= 0 && ok; ++ox)
                    if (g.get_or0(qx + ox, qy + oy) && g.get_or0(qx + ox + 1, qy + oy) &&
                        g.get_or0(qx + ox, qy + oy + 1) && g.get_or0(qx + ox + 1, qy + oy + 1))
                        ok = false;
            if (ok) {
                auto comp = component_of(g, qx, qy);
                auto in_comp = [&](int px, int py) {
                    return comp[static_cast<size_t>(py) * g.width + px] != 0;
                };
                // the former neighbors stay together and the bridge touches
                // nothing outside their component
                for (auto [nx, ny] : nbrs)
                    if (!in_comp(nx, ny)) ok = false;
                for (int oy = -1; oy <= 1 && ok; ++oy)
                    for (int ox = -1; ox <= 1 && ok; ++ox) {
                        int px = qx + ox, py = qy + oy;
                        if ((ox || oy) && g.get_or0(px, py) && !in_comp(px, py)) ok = false;
                    }
            }
            if (ok) return true;
            g.set(x, y, 1);
            g.set(qx, qy, 0);
        }
    return false;
}

void break_locked_blocks(Bitmap& g, const Bitmap& source) {
    for (;;) {
        bool changed = false;
        for (int y = 0; y + 1 < g.height && !changed; ++y)
            for (int x = 0; x + 1 < g.width && !changed; ++x) {
                if (!(g.at(x, y) && g.at(x + 1, y) && g.at(x, y + 1) && g.at(x + 1, y + 1)))
                    continue;
                for (auto [bx, by] : {std::pair{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}}) {
                    if (globally_safe_delete(g, bx, by)) {
                        g.set(bx, by, 0);
                        changed = true;
                        break;
                    }
                }
                if (changed) break;
                for (auto [bx, by] : {std::pair{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}}) {
                    if (reroute_block_pixel(g, source, bx, by)) {
                        changed = true;
                        break;
                    }
                }
            }
        if (!changed) return;
        cleanup_simple_points(g);
    }
}

} // namespace

namespace detail {

size_t thin_subpass(Bitmap& grid, int dir, std::vector<uint8_t>& flags, Exec exec) {
    const int h = grid.height;
    const int w = grid.width;
    flags.assign(static_cast<size_t>(w) * h, 0);
    size_t deleted = 0;

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : deleted) schedule(static)
        for (int y = 0; y < h; ++y)
            deleted += flag_row(grid, y, dir, flags.data() + static_cast<size_t>(y) * w);
#else
        for (int y = 0; y < h; ++y)
            deleted += flag_row(grid, y, dir, flags.data() + static_cast<size_t>(y) * w);
#endif
    } else {
        for (int y = 0; y < h; ++y)
            deleted += flag_row(grid, y, dir, flags.data() + static_cast<size_t>(y) * w);
    }

    if (deleted) {
        for (size_t i = 0; i < flags.size(); ++i)
            if (flags[i]) grid.pixels[i] = 0;
    }
    return deleted;
}

} // namespace detail

Skeleton thin(const Bitmap& b, Exec exec) {
    Skeleton s;
    s.grid = b;
    s.grid.dpi = b.dpi;

    std::vector<uint8_t> flags;
    for (;;) {
        size_t deleted = 0;
        for (int dir = 0; dir < 4; ++dir)
            deleted += detail::thin_subpass(s.grid, dir, flags, exec);
        if (deleted == 0) break;
    }
    cleanup_simple_points(s.grid);
    break_locked_blocks(s.grid, b);

    s.avg_line_width = measure_line_width(b, s.grid);
    return s;
}

double measure_line_width(const Bitmap& source, const Bitmap& skel) {
    size_t skel_fg = skel.foreground_count();
    if (skel_fg == 0) return 1.0;
    return static_cast<double>(source.foreground_count()) / static_cast<double>(skel_fg);
}

} // namespace skg
