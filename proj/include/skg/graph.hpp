#ifndef SKG_GRAPH_HPP
#define SKG_GRAPH_HPP

#include <optional>
#include <string>
#include <vector>

#include "skg/thinning.hpp"

namespace skg {

// Freeman directions, counter-clockwise with y growing downward:
// 0=E, 1=NE, 2=N, 3=NW, 4=W, 5=SW, 6=S, 7=SE.
inline constexpr int kDirDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kDirDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

inline int reverse_dir(int d) { return (d + 4) & 7; }

// Signed 45-degree-unit heading change from `from` to `to`, in [-4, 3].
inline int turn_delta(int from, int to) { return (((to - from + 4) & 7) - 4); }

// Direction from pixel a to 8-adjacent pixel b.
int dir_between(int ax, int ay, int bx, int by);

struct Node {
    int id = 0;
    int x = 0;
    int y = 0;
    int index = 0;           // foreground neighbor count at build time
    bool loop_start = false; // synthetic start of a closed contour
    std::vector<int> branch_refs; // branches starting at this node

    friend bool operator==(const Node&, const Node&) = default;
};

struct Branch {
    int id = 0;
    int start_node = 0;
    // Node the chain terminates on; empty when the chain closes back onto
    // its own start node.
    std::optional<int> end_node;
    std::vector<uint8_t> chain; // absolute Freeman directions, one per step

    friend bool operator==(const Branch&, const Branch&) = default;
};

struct ContourGraph {
    std::vector<Node> nodes;
    std::vector<Branch> branches;
    int n_loops = 0; // synthetic loop-start nodes introduced
    int width = 0;
    int height = 0;
    double avg_line_width = 1.0;
    int degenerate_nodes = 0; // pixels with index > 4 kept as nodes

    friend bool operator==(const ContourGraph& a, const ContourGraph& b) {
        return a.nodes == b.nodes && a.branches == b.branches && a.n_loops == b.n_loops &&
               a.width == b.width && a.height == b.height &&
               a.avg_line_width == b.avg_line_width;
    }
};

// Count of foreground 8-neighbors of a foreground pixel. Out-of-bounds
// neighbors count 0. Throws background_pixel when (x, y) is not foreground.
int pixel_index(const Bitmap& grid, int x, int y);

// Classifies every skeleton pixel by neighbor index and traces branches:
// nodes are pixels with index != 2 plus one synthetic start per pure closed
// contour; branches follow index-2 line pixels between node pixels. Every
// skeleton pixel is covered exactly once. Throws not_thinned if the grid
// contains a solid 2x2 block.
ContourGraph build_graph(const Skeleton& skel);

// Text dump for diffing: "N <id> <x> <y> <index>" and
// "B <id> <start> <end|loop> <chain digits>".
std::string dump_graph(const ContourGraph& g);

namespace detail {
// Per-pixel neighbor-count map; 0xFF for background pixels.
std::vector<uint8_t> index_map(const Bitmap& grid, Exec exec = Exec::parallel);
} // namespace detail

} // namespace skg

#endif
