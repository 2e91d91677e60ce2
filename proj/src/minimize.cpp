#include "skg/minimize.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace skg {

namespace {

// One side of a branch as seen from the node it touches.
struct BranchEnd {
    int branch = 0;
    bool at_start = true; // true: the chain's first step leaves from here
    int out_dir = 0;      // first step direction when leaving through this end
};

struct TraceState {
    const ContourGraph& g;
    std::vector<std::vector<BranchEnd>> ends_at; // per node, sorted by out_dir
    std::vector<char> branch_covered;
    std::vector<char> node_covered;

    explicit TraceState(const ContourGraph& graph)
        : g(graph), ends_at(graph.nodes.size()),
          branch_covered(graph.branches.size(), 0),
          node_covered(graph.nodes.size(), 0) {
        for (const Branch& b : g.branches) {
            if (b.chain.empty()) continue;
            int start = b.start_node;
            int end = b.end_node.value_or(start);
            ends_at[start].push_back({b.id, true, b.chain.front()});
            ends_at[end].push_back({b.id, false, reverse_dir(b.chain.back())});
        }
        for (auto& v : ends_at)
            std::sort(v.begin(), v.end(), [](const BranchEnd& a, const BranchEnd& b) {
                if (a.out_dir != b.out_dir) return a.out_dir < b.out_dir;
                if (a.branch != b.branch) return a.branch < b.branch;
                return a.at_start && !b.at_start;
            });
    }

    int far_node(const BranchEnd& e) const {
        const Branch& b = g.branches[e.branch];
        int start = b.start_node;
        int end = b.end_node.value_or(start);
        return e.at_start ? end : start;
    }

    void append_oriented(const BranchEnd& e, std::vector<uint8_t>& chain) const {
        const Branch& b = g.branches[e.branch];
        if (e.at_start) {
            chain.insert(chain.end(), b.chain.begin(), b.chain.end());
        } else {
            for (auto it = b.chain.rbegin(); it != b.chain.rend(); ++it)
                chain.push_back(static_cast<uint8_t>(reverse_dir(*it)));
        }
    }

    // Walks from `node` through `first`, concatenating through uncovered
    // junctions with the minimal-turn exit, until a covered node, an
    // endpoint, or a junction with no free exits.
    std::vector<uint8_t> trace(int node, const BranchEnd& first) {
        std::vector<uint8_t> chain;
        BranchEnd cur = first;
        (void)node;
        for (;;) {
            branch_covered[cur.branch] = 1;
            append_oriented(cur, chain);
            int far = far_node(cur);
            if (node_covered[far]) return chain;
            const Node& fn = g.nodes[far];
            if (fn.index == 1) {
                node_covered[far] = 1;
                return chain;
            }
            int in_dir = chain.back();
            const BranchEnd* best = nullptr;
            int best_turn = 9;
            for (const BranchEnd& cand : ends_at[far]) {
                if (branch_covered[cand.branch]) continue;
                int t = std::abs(turn_delta(in_dir, cand.out_dir));
                if (t < best_turn) {
                    best_turn = t;
                    best = &cand;
                }
            }
            if (!best) return chain; // dead end at a fully consumed junction
            cur = *best;
        }
    }
};

} // namespace

MinimizedGraph minimize(const ContourGraph& g) {
    for (const Node& n : g.nodes)
        if (n.index == 4)
            fail(Errc::unsmoothed_input, "minimize: index-4 node present, smooth first");

    MinimizedGraph m;
    m.width = g.width;
    m.height = g.height;
    m.avg_line_width = g.avg_line_width;
    m.n_loops = 0;

    TraceState st(g);

    auto add_anchor = [&](const Node& n) -> int {
        Anchor a;
        a.id = static_cast<int>(m.anchors.size());
        a.x = n.x;
        a.y = n.y;
        a.index = n.index;
        m.anchors.push_back(a);
        return a.id;
    };
    auto add_branch = [&](int anchor, std::vector<uint8_t>&& chain) {
        MinBranch b;
        b.id = static_cast<int>(m.branches.size());
        b.anchor = anchor;
        b.chain = std::move(chain);
        m.branches.push_back(std::move(b));
    };

    // Steps 1-2: junction nodes in (y,x) order.
    for (const Node& n : g.nodes) {
        if (n.loop_start || n.index < 3) continue;
        if (st.node_covered[n.id]) continue;
        st.node_covered[n.id] = 1;
        int anchor = -1;
        for (const BranchEnd& e : st.ends_at[n.id]) {
            if (st.branch_covered[e.branch]) continue;
            auto chain = st.trace(n.id, e);
            if (anchor < 0) anchor = add_anchor(n);
            add_branch(anchor, std::move(chain));
        }
    }

    // Steps 3-4: endpoint nodes.
    for (const Node& n : g.nodes) {
        if (n.loop_start || n.index != 1) continue;
        if (st.node_covered[n.id]) continue;
        st.node_covered[n.id] = 1;
        int anchor = -1;
        for (const BranchEnd& e : st.ends_at[n.id]) {
            if (st.branch_covered[e.branch]) continue;
            auto chain = st.trace(n.id, e);
            if (anchor < 0) anchor = add_anchor(n);
            add_branch(anchor, std::move(chain));
        }
    }

    // Pure closed contours keep their loop-start node.
    for (const Node& n : g.nodes) {
        if (!n.loop_start || st.node_covered[n.id]) continue;
        st.node_covered[n.id] = 1;
        int anchor = add_anchor(n);
        for (const BranchEnd& e : st.ends_at[n.id]) {
            if (st.branch_covered[e.branch]) continue;
            add_branch(anchor, st.trace(n.id, e));
        }
        ++m.n_loops;
    }

    // Isolated pixels stay as branchless anchors so geometry survives.
    for (const Node& n : g.nodes) {
        if (n.index != 0 || n.loop_start || st.node_covered[n.id]) continue;
        st.node_covered[n.id] = 1;
        add_anchor(n);
    }

    return m;
}

long long branch_count(long long n1, long long n3, long long n_loops) {
    long long s = n1 + 3 * n3;
    if (s % 2 != 0)
        fail(Errc::parity_violation, "branch_count: n1 + 3*n3 is odd");
    return s / 2 + n_loops;
}

CountReport verify_counts(const MinimizedGraph& m) {
    std::map<std::pair<int, int>, int> degree;
    for (const MinBranch& b : m.branches) {
        const Anchor& a = m.anchors[b.anchor];
        degree[{a.x, a.y}] += 1;
        int x = a.x, y = a.y;
        for (uint8_t d : b.chain) {
            x += kDirDx[d];
            y += kDirDy[d];
        }
        degree[{x, y}] += 1;
    }

    CountReport r;
    r.observed = static_cast<long long>(m.branches.size());
    for (const auto& [pt, deg] : degree) {
        if (deg == 1) ++r.n1_min;
        else if (deg == 2) ++r.n_loops;
        else if (deg == 3) ++r.n3_min;
        // degree >= 4 only arises from degenerate junctions; it will show
        // up as a count mismatch below.
    }
    long long s = r.n1_min + 3 * r.n3_min;
    if (s % 2 == 0) {
        r.predicted = s / 2 + r.n_loops;
        r.consistent = (r.predicted == r.observed);
    } else {
        r.predicted = -1;
        r.consistent = false;
    }
    return r;
}

std::string CountReport::to_json() const {
    std::ostringstream os;
    os << "{\"n1_min\":" << n1_min << ",\"n3_min\":" << n3_min << ",\"n_loops\":" << n_loops
       << ",\"observed_branches\":" << observed << ",\"predicted_branches\":" << predicted
       << ",\"consistent\":" << (consistent ? "true" : "false") << "}";
    return os.str();
}

} // namespace skg
