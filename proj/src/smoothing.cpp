#include "skg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "skg/render.hpp"

namespace skg {

namespace {

struct WNode {
    int x = 0, y = 0;
    int index = 0;
    bool loop_start = false;
    bool alive = true;
};

struct WBranch {
    int a = 0, b = 0;               // node ids; a == b for loops and rings
    std::vector<uint8_t> chain;     // oriented a -> b
    bool alive = true;
};

struct End {
    int branch = 0;
    int side = 0;    // 0 = a side, 1 = b side
    int arrival = 0; // direction of the last step into the node
};

void reverse_branch(WBranch& b) {
    std::vector<uint8_t> rev;
    rev.reserve(b.chain.size());
    for (auto it = b.chain.rbegin(); it != b.chain.rend(); ++it)
        rev.push_back(static_cast<uint8_t>(reverse_dir(*it)));
    b.chain = std::move(rev);
    std::swap(b.a, b.b);
}

std::vector<std::pair<int, int>> walk_pixels(int x, int y, const std::vector<uint8_t>& chain) {
    std::vector<std::pair<int, int>> px;
    px.reserve(chain.size() + 1);
    px.emplace_back(x, y);
    for (uint8_t d : chain) {
        x += kDirDx[d];
        y += kDirDy[d];
        px.emplace_back(x, y);
    }
    return px;
}

// Dissolves every node with index >= 4 into pass-through joins, pairing
// branch ends by minimal turning angle. A join of a loop's own two ends
// closes it into a ring whose smallest pixel becomes the new start node.
ContourGraph eliminate_crossings(const ContourGraph& g) {
    bool any = false;
    for (const Node& n : g.nodes)
        if (!n.loop_start && n.index >= 4) any = true;
    if (!any) return g;

    std::vector<WNode> nodes;
    nodes.reserve(g.nodes.size());
    for (const Node& n : g.nodes) nodes.push_back({n.x, n.y, n.index, n.loop_start, true});
    std::vector<WBranch> branches;
    branches.reserve(g.branches.size());
    for (const Branch& b : g.branches)
        branches.push_back({b.start_node, b.end_node.value_or(b.start_node), b.chain, true});
    int rings_added = 0;

    auto ends_at = [&](int node) {
        std::vector<End> ends;
        for (size_t i = 0; i < branches.size(); ++i) {
            const WBranch& b = branches[i];
            if (!b.alive || b.chain.empty()) continue;
            if (b.a == node)
                ends.push_back({static_cast<int>(i), 0, reverse_dir(b.chain.front())});
            if (b.b == node)
                ends.push_back({static_cast<int>(i), 1, static_cast<int>(b.chain.back())});
        }
        std::sort(ends.begin(), ends.end(), [](const End& l, const End& r) {
            if (l.arrival != r.arrival) return l.arrival < r.arrival;
            if (l.branch != r.branch) return l.branch < r.branch;
            return l.side < r.side;
        });
        return ends;
    };

    auto pass_turn = [](const End& i, const End& j) {
        return std::abs(turn_delta(i.arrival, reverse_dir(j.arrival)));
    };

    for (size_t xi = 0; xi < g.nodes.size(); ++xi) {
        if (nodes[xi].loop_start || nodes[xi].index < 4) continue;
        for (;;) {
            auto ends = ends_at(static_cast<int>(xi));
            if (ends.size() < 2) {
                if (ends.empty())
                    nodes[xi].alive = false;
                else
                    nodes[xi].index = 1; // odd-degree remnant: one branch
                                         // starts here, an endpoint now
                break;
            }
            size_t bi = 0, bj = 1;
            int best = 9;
            for (size_t i = 0; i < ends.size(); ++i)
                for (size_t j = i + 1; j < ends.size(); ++j) {
                    int t = pass_turn(ends[i], ends[j]);
                    if (t < best) {
                        best = t;
                        bi = i;
                        bj = j;
                    }
                }
            const End ei = ends[bi], ej = ends[bj];
            if (ei.branch != ej.branch) {
                WBranch lhs = branches[ei.branch];
                WBranch rhs = branches[ej.branch];
                branches[ei.branch].alive = false;
                branches[ej.branch].alive = false;
                if (ei.side == 0) reverse_branch(lhs); // now ends at the crossing
                if (ej.side == 1) reverse_branch(rhs); // now starts at the crossing
                WBranch merged;
                merged.a = lhs.a;
                merged.b = rhs.b;
                merged.chain = lhs.chain;
                merged.chain.insert(merged.chain.end(), rhs.chain.begin(), rhs.chain.end());
                branches.push_back(std::move(merged));
            } else {
                // Both ends of a loop: close it into a ring.
                WBranch loop = branches[ei.branch];
                branches[ei.branch].alive = false;
                auto px = walk_pixels(nodes[xi].x, nodes[xi].y, loop.chain);
                px.pop_back(); // closing pixel repeats the start
                size_t m = px.size() > 1 ? 1 : 0;
                for (size_t k = 1; k < px.size(); ++k)
                    if (std::pair(px[k].second, px[k].first) < std::pair(px[m].second, px[m].first))
                        m = k;
                std::vector<uint8_t> rot(loop.chain.begin() + m, loop.chain.end());
                rot.insert(rot.end(), loop.chain.begin(), loop.chain.begin() + m);
                WNode ring{px[m].first, px[m].second, 2, true, true};
                nodes.push_back(ring);
                WBranch rb;
                rb.a = rb.b = static_cast<int>(nodes.size()) - 1;
                rb.chain = std::move(rot);
                branches.push_back(std::move(rb));
                ++rings_added;
            }
        }
    }

    // Rebuild a canonical graph: surviving nodes keep relative order.
    ContourGraph out;
    out.width = g.width;
    out.height = g.height;
    out.avg_line_width = g.avg_line_width;
    out.n_loops = g.n_loops + rings_added;

    std::vector<int> new_id(nodes.size(), -1);
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].alive) continue;
        Node n;
        n.id = static_cast<int>(out.nodes.size());
        n.x = nodes[i].x;
        n.y = nodes[i].y;
        n.index = nodes[i].index;
        n.loop_start = nodes[i].loop_start;
        if (n.index > 4) ++out.degenerate_nodes;
        new_id[i] = n.id;
        out.nodes.push_back(std::move(n));
    }
    for (WBranch& b : branches) {
        if (!b.alive) continue;
        if (b.a != b.b && new_id[b.b] < new_id[b.a]) reverse_branch(b);
        Branch nb;
        nb.id = static_cast<int>(out.branches.size());
        nb.start_node = new_id[b.a];
        if (b.a != b.b) nb.end_node = new_id[b.b];
        nb.chain = std::move(b.chain);
        out.nodes[nb.start_node].branch_refs.push_back(nb.id);
        out.branches.push_back(std::move(nb));
    }
    return out;
}

struct RasterEdits {
    std::vector<std::pair<int, int>> remove;
    std::vector<std::pair<int, int>> add;
    bool empty() const { return remove.empty() && add.empty(); }
};

void bresenham(int x0, int y0, int x1, int y1, std::vector<std::pair<int, int>>& out) {
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        out.emplace_back(x0, y0);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

// (a, b): short branches from a junction to an endpoint are noise.
RasterEdits find_spurs(const ContourGraph& g, double max_len) {
    RasterEdits e;
    for (const Branch& b : g.branches) {
        if (!b.end_node) continue;
        if (static_cast<double>(b.chain.size()) > max_len) continue;
        const Node& s = g.nodes[b.start_node];
        const Node& t = g.nodes[*b.end_node];
        const Node* junction = nullptr;
        if (s.index == 1 && t.index >= 3)
            junction = &t;
        else if (t.index == 1 && s.index >= 3)
            junction = &s;
        else
            continue;
        auto px = walk_pixels(s.x, s.y, b.chain);
        for (auto& p : px)
            if (p != std::pair(junction->x, junction->y)) e.remove.push_back(p);
    }
    return e;
}

// (e): junction pairs one true junction split into. The merged node sits at
// the first node's coordinates; the second node's other branches are
// re-attached with straight segments.
RasterEdits find_junction_merges(const ContourGraph& g, double radius) {
    RasterEdits e;
    std::set<int> used;
    for (const Branch& b : g.branches) {
        if (!b.end_node || *b.end_node == b.start_node) continue;
        if (static_cast<double>(b.chain.size()) > radius) continue;
        int i = std::min(b.start_node, *b.end_node);
        int j = std::max(b.start_node, *b.end_node);
        const Node& j1 = g.nodes[i];
        const Node& j2 = g.nodes[j];
        if (j1.index != 3 || j2.index != 3) continue;
        double dx = j1.x - j2.x, dy = j1.y - j2.y;
        if (std::sqrt(dx * dx + dy * dy) > radius) continue;
        if (used.count(i) || used.count(j)) continue;
        used.insert(i);
        used.insert(j);

        // Drop the connector interior and the second junction pixel.
        auto px = walk_pixels(g.nodes[b.start_node].x, g.nodes[b.start_node].y, b.chain);
        for (size_t k = 1; k + 1 < px.size(); ++k) e.remove.push_back(px[k]);
        e.remove.emplace_back(j2.x, j2.y);

        // Re-attach the second junction's other branches to the first.
        for (const Branch& ob : g.branches) {
            if (ob.id == b.id || ob.chain.empty()) continue;
            std::vector<std::pair<int, int>> stubs;
            if (ob.start_node == j2.id) {
                auto wp = walk_pixels(j2.x, j2.y, ob.chain);
                stubs.push_back(wp[1]);
                if (!ob.end_node && wp.size() >= 2) // loop at j2: both sides dangle
                    stubs.push_back(wp[wp.size() - 2]);
            } else if (ob.end_node && *ob.end_node == j2.id) {
                auto wp = walk_pixels(g.nodes[ob.start_node].x, g.nodes[ob.start_node].y, ob.chain);
                stubs.push_back(wp[wp.size() - 2]);
            }
            for (auto [sx, sy] : stubs) bresenham(j1.x, j1.y, sx, sy, e.add);
        }
    }
    return e;
}

bool reachable_within(const Bitmap& raster, int x0, int y0, int x1, int y1, int cap) {
    std::deque<std::tuple<int, int, int>> q;
    std::set<std::pair<int, int>> seen;
    q.push_back({x0, y0, 0});
    seen.insert({x0, y0});
    while (!q.empty()) {
        auto [x, y, d] = q.front();
        q.pop_front();
        if (x == x1 && y == y1) return true;
        if (d >= cap) continue;
        for (int k = 0; k < 8; ++k) {
            int nx = x + kDirDx[k], ny = y + kDirDy[k];
            if (!raster.in_bounds(nx, ny) || !raster.at(nx, ny)) continue;
            if (seen.insert({nx, ny}).second) q.push_back({nx, ny, d + 1});
        }
    }
    return false;
}

// (c): mutually-closest endpoint pairs within reach are joined by a straight
// chain. Pairs already connected by a short skeleton path are left alone so
// short open strokes do not close onto themselves.
RasterEdits find_gap_bridges(const ContourGraph& g, const Bitmap& raster, double gap) {
    RasterEdits e;
    std::vector<const Node*> eps;
    for (const Node& n : g.nodes)
        if (!n.loop_start && n.index == 1) eps.push_back(&n);
    if (eps.size() < 2) return e;

    auto dist = [](const Node* a, const Node* b) {
        double dx = a->x - b->x, dy = a->y - b->y;
        return std::sqrt(dx * dx + dy * dy);
    };
    std::vector<int> nearest(eps.size(), -1);
    for (size_t i = 0; i < eps.size(); ++i) {
        double best = 1e18;
        for (size_t j = 0; j < eps.size(); ++j) {
            if (i == j) continue;
            double d = dist(eps[i], eps[j]);
            if (d < best) {
                best = d;
                nearest[i] = static_cast<int>(j);
            }
        }
    }
    int cap = static_cast<int>(std::ceil(4.0 * gap)) + 2;
    for (size_t i = 0; i < eps.size(); ++i) {
        if (nearest[i] < 0) continue;
        size_t j = static_cast<size_t>(nearest[i]);
        if (j < i || nearest[j] != static_cast<int>(i)) continue;
        if (dist(eps[i], eps[j]) > gap) continue;
        if (reachable_within(raster, eps[i]->x, eps[i]->y, eps[j]->x, eps[j]->y, cap)) continue;
        bresenham(eps[i]->x, eps[i]->y, eps[j]->x, eps[j]->y, e.add);
    }
    return e;
}

ContourGraph smooth_lossy(const ContourGraph& g, const SmoothingParams& p) {
    Bitmap raster = rasterize_graph(g);
    const double alw = g.avg_line_width;

    for (int pass = 0; pass < 10; ++pass) {
        Skeleton sk{raster, alw};
        ContourGraph work = eliminate_crossings(build_graph(sk));
        RasterEdits e = find_spurs(work, p.spur_length_max);
        if (e.empty()) e = find_junction_merges(work, p.node_merge_radius);
        if (e.empty()) e = find_gap_bridges(work, raster, p.gap_bridge_max);
        if (e.empty()) break;
        for (auto [x, y] : e.remove)
            if (raster.in_bounds(x, y)) raster.set(x, y, 0);
        for (auto [x, y] : e.add)
            if (raster.in_bounds(x, y)) raster.set(x, y, 1);
        raster = thin(raster).grid; // renormalize after edits
    }

    Skeleton sk{raster, alw};
    return eliminate_crossings(build_graph(sk));
}

} // namespace

ContourGraph smooth(const ContourGraph& g, const SmoothingParams& p) {
    if (p.mode == SmoothMode::lossless) return eliminate_crossings(g);
    return smooth_lossy(eliminate_crossings(g), p);
}

} // namespace skg
