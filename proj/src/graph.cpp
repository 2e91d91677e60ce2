#include "skg/graph.hpp"

#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace skg {

int dir_between(int ax, int ay, int bx, int by) {
    int dx = bx - ax, dy = by - ay;
    for (int d = 0; d < 8; ++d)
        if (kDirDx[d] == dx && kDirDy[d] == dy) return d;
    fail(Errc::invalid_argument, "dir_between: pixels not 8-adjacent");
}

int pixel_index(const Bitmap& grid, int x, int y) {
    if (!grid.in_bounds(x, y) || !grid.at(x, y))
        fail(Errc::background_pixel, "pixel_index: not a foreground pixel");
    int n = 0;
    for (int d = 0; d < 8; ++d)
        n += grid.get_or0(x + kDirDx[d], y + kDirDy[d]);
    return n;
}

namespace detail {

std::vector<uint8_t> index_map(const Bitmap& grid, Exec exec) {
    const int w = grid.width, h = grid.height;
    std::vector<uint8_t> idx(static_cast<size_t>(w) * h, 0xFF);
    auto row_job = [&](int y) {
        for (int x = 0; x < w; ++x) {
            if (!grid.at(x, y)) continue;
            int n = 0;
            for (int d = 0; d < 8; ++d)
                n += grid.get_or0(x + kDirDx[d], y + kDirDy[d]);
            idx[static_cast<size_t>(y) * w + x] = static_cast<uint8_t>(n);
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
    return idx;
}

} // namespace detail

namespace {

bool has_full_2x2(const Bitmap& g) {
    for (int y = 0; y + 1 < g.height; ++y)
        for (int x = 0; x + 1 < g.width; ++x)
            if (g.at(x, y) && g.at(x + 1, y) && g.at(x, y + 1) && g.at(x + 1, y + 1))
                return true;
    return false;
}

struct Tracer {
    const Bitmap& g;
    const std::vector<uint8_t>& idx;
    std::vector<int> node_id;       // -1 where not a node pixel
    std::vector<uint8_t> edge_used; // bitmask of consumed outgoing directions

    Tracer(const Bitmap& grid, const std::vector<uint8_t>& index_map)
        : g(grid), idx(index_map),
          node_id(static_cast<size_t>(grid.width) * grid.height, -1),
          edge_used(static_cast<size_t>(grid.width) * grid.height, 0) {}

    size_t pos(int x, int y) const { return static_cast<size_t>(y) * g.width + x; }

    void use_edge(int x, int y, int d) {
        edge_used[pos(x, y)] |= static_cast<uint8_t>(1u << d);
        edge_used[pos(x + kDirDx[d], y + kDirDy[d])] |= static_cast<uint8_t>(1u << reverse_dir(d));
    }
    bool edge_free(int x, int y, int d) const {
        return !(edge_used[pos(x, y)] & (1u << d));
    }

    // Follows line pixels from (x,y) after a step in direction d until the
    // next node pixel. Appends steps to chain; returns the terminal pixel.
    std::pair<int, int> follow(int x, int y, int d, std::vector<uint8_t>& chain) {
        chain.push_back(static_cast<uint8_t>(d));
        use_edge(x, y, d);
        int cx = x + kDirDx[d], cy = y + kDirDy[d];
        while (node_id[pos(cx, cy)] < 0) {
            int back = reverse_dir(chain.back());
            int next = -1;
            for (int nd = 0; nd < 8; ++nd) {
                if (nd == back) continue;
                if (g.get_or0(cx + kDirDx[nd], cy + kDirDy[nd])) {
                    next = nd;
                    break;
                }
            }
            if (next < 0) // cannot happen on an index-consistent grid
                fail(Errc::not_thinned, "build_graph: line pixel without continuation");
            chain.push_back(static_cast<uint8_t>(next));
            use_edge(cx, cy, next);
            cx += kDirDx[next];
            cy += kDirDy[next];
        }
        return {cx, cy};
    }
};

} // namespace

ContourGraph build_graph(const Skeleton& skel) {
    const Bitmap& g = skel.grid;
    if (has_full_2x2(g))
        fail(Errc::not_thinned, "build_graph: grid contains a solid 2x2 block");

    ContourGraph out;
    out.width = g.width;
    out.height = g.height;
    out.avg_line_width = skel.avg_line_width;

    std::vector<uint8_t> idx = detail::index_map(g);
    Tracer tr(g, idx);

    // Node pixels in (y,x) order: every foreground pixel that is not a
    // plain line point. Index 0 = isolated, 1 = endpoint, 3/4 = junction or
    // crossing; 5+ is kept as a node and counted as degenerate.
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            uint8_t v = idx[tr.pos(x, y)];
            if (v == 0xFF || v == 2) continue;
            Node n;
            n.id = static_cast<int>(out.nodes.size());
            n.x = x;
            n.y = y;
            n.index = v;
            if (v > 4) ++out.degenerate_nodes;
            tr.node_id[tr.pos(x, y)] = n.id;
            out.nodes.push_back(std::move(n));
        }

    // Branches from each node, outgoing directions in Freeman order.
    for (size_t ni = 0; ni < out.nodes.size(); ++ni) {
        Node& n = out.nodes[ni];
        for (int d = 0; d < 8; ++d) {
            if (!g.get_or0(n.x + kDirDx[d], n.y + kDirDy[d])) continue;
            if (!tr.edge_free(n.x, n.y, d)) continue;
            Branch b;
            b.id = static_cast<int>(out.branches.size());
            b.start_node = n.id;
            auto [ex, ey] = tr.follow(n.x, n.y, d, b.chain);
            int end_id = tr.node_id[tr.pos(ex, ey)];
            if (end_id != n.id) b.end_node = end_id;
            n.branch_refs.push_back(b.id);
            out.branches.push_back(std::move(b));
        }
    }

    // Remaining unvisited line pixels form pure closed contours. The first
    // pixel met in (y,x) scan order is the contour's smallest coordinate and
    // becomes its deterministic start node.
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            size_t p = tr.pos(x, y);
            if (idx[p] != 2 || tr.edge_used[p] || tr.node_id[p] >= 0) continue;
            Node n;
            n.id = static_cast<int>(out.nodes.size());
            n.x = x;
            n.y = y;
            n.index = 2;
            n.loop_start = true;
            tr.node_id[p] = n.id;
            out.nodes.push_back(n);
            ++out.n_loops;

            int d0 = -1;
            for (int d = 0; d < 8 && d0 < 0; ++d)
                if (g.get_or0(x + kDirDx[d], y + kDirDy[d])) d0 = d;
            Branch b;
            b.id = static_cast<int>(out.branches.size());
            b.start_node = n.id;
            tr.follow(x, y, d0, b.chain); // terminates back at the start node
            out.nodes[n.id].branch_refs.push_back(b.id);
            out.branches.push_back(std::move(b));
        }

    return out;
}

std::string dump_graph(const ContourGraph& g) {
    std::ostringstream os;
    for (const Node& n : g.nodes)
        os << "N " << n.id << " " << n.x << " " << n.y << " " << n.index << "\n";
    for (const Branch& b : g.branches) {
        os << "B " << b.id << " " << b.start_node << " ";
        if (b.end_node)
            os << *b.end_node;
        else
            os << "loop";
        os << " ";
        for (uint8_t d : b.chain) os << static_cast<char>('0' + d);
        os << "\n";
    }
    return os.str();
}

} // namespace skg
