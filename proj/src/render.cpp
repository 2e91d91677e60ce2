#include "skg/render.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace skg {

namespace {

void plot_walk(Bitmap& out, int x, int y, const std::vector<uint8_t>& chain) {
    if (!out.in_bounds(x, y))
        fail(Errc::out_of_bounds, "rasterize: walk start outside image");
    out.set(x, y, 1);
    for (uint8_t d : chain) {
        x += kDirDx[d];
        y += kDirDy[d];
        if (!out.in_bounds(x, y))
            fail(Errc::out_of_bounds, "rasterize: walk leaves image");
        out.set(x, y, 1);
    }
}

} // namespace

Bitmap rasterize_skeleton(const MinimizedGraph& m) {
    Bitmap out(m.width, m.height);
    for (const Anchor& a : m.anchors) {
        if (!out.in_bounds(a.x, a.y))
            fail(Errc::out_of_bounds, "rasterize: anchor outside image");
        out.set(a.x, a.y, 1);
    }
    for (const MinBranch& b : m.branches)
        plot_walk(out, m.anchors[b.anchor].x, m.anchors[b.anchor].y, b.chain);
    return out;
}

Bitmap rasterize_graph(const ContourGraph& g) {
    Bitmap out(g.width, g.height);
    for (const Node& n : g.nodes) {
        if (!out.in_bounds(n.x, n.y))
            fail(Errc::out_of_bounds, "rasterize: node outside image");
        out.set(n.x, n.y, 1);
    }
    for (const Branch& b : g.branches)
        plot_walk(out, g.nodes[b.start_node].x, g.nodes[b.start_node].y, b.chain);
    return out;
}

Bitmap thicken(const Bitmap& skel, double width, Exec exec) {
    if (width < 1.0) fail(Errc::invalid_argument, "thicken: width must be >= 1");
    // Disc radius (width - 1) / 2, rounded to the nearest half pixel.
    double radius = std::round(width - 1.0) / 2.0;
    if (radius <= 0.0) return skel;

    int ir = static_cast<int>(std::ceil(radius));
    std::vector<std::pair<int, int>> disc;
    for (int dy = -ir; dy <= ir; ++dy)
        for (int dx = -ir; dx <= ir; ++dx)
            if (dx * dx + dy * dy <= radius * radius + 1e-9) disc.emplace_back(dx, dy);

    const int w = skel.width, h = skel.height;
    Bitmap out(w, h);
    out.dpi = skel.dpi;
    // Gather form: each output pixel reads its disc neighborhood, so rows
    // are independent and the result does not depend on scheduling.
    auto row_job = [&](int y) {
        for (int x = 0; x < w; ++x) {
            for (auto [dx, dy] : disc) {
                if (skel.get_or0(x + dx, y + dy)) {
                    out.set(x, y, 1);
                    break;
                }
            }
        }
    };
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (int y = 0; y < h; ++y) row_job(y);
#else
        for (int y = 0; y < h; ++y) row_job(y);
#endif
    } else {
        for (int y = 0; y < h; ++y) row_job(y);
    }
    return out;
}

} // namespace skg
