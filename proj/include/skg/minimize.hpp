#ifndef SKG_MINIMIZE_HPP
#define SKG_MINIMIZE_HPP

#include <string>

#include "skg/graph.hpp"

namespace skg {

// A node retained after minimization as the start of one or more branches.
// index records the pixel index the node had in the contour graph (1 or 3;
// 2 for loop starts, 0 for isolated pixels kept for geometry).
struct Anchor {
    int id = 0;
    int x = 0;
    int y = 0;
    int index = 0;

    friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct MinBranch {
    int id = 0;
    int anchor = 0;             // ordinal into MinimizedGraph::anchors
    std::vector<uint8_t> chain; // absolute Freeman directions

    friend bool operator==(const MinBranch&, const MinBranch&) = default;
};

struct MinimizedGraph {
    std::vector<Anchor> anchors;
    std::vector<MinBranch> branches;
    int n_loops = 0;
    int width = 0;
    int height = 0;
    double avg_line_width = 1.0;

    friend bool operator==(const MinimizedGraph&, const MinimizedGraph&) = default;
};

// Covering trace: junctions are selected in (y,x) order and their uncovered
// outgoing branches traced until a covered node or an endpoint, passing
// straight through uncovered junctions met on the way (minimal turning
// angle); then the remaining endpoints, then pure closed contours. Branch
// chains concatenate across passed-through nodes, whose coordinates become
// interior chain pixels. The rendered pixel set is unchanged.
// Throws unsmoothed_input when an index-4 node is present.
MinimizedGraph minimize(const ContourGraph& g);

// Branch-count law for smoothed graphs: (n1 + 3*n3)/2 + n_loops.
// Throws parity_violation when n1 + 3*n3 is odd.
long long branch_count(long long n1, long long n3, long long n_loops);

struct CountReport {
    long long n1_min = 0;     // degree-1 vertices of the branch structure
    long long n3_min = 0;     // degree-3 vertices
    long long n_loops = 0;    // degree-2 vertices (closed-contour starts)
    long long observed = 0;   // branch count
    long long predicted = -1; // (n1 + 3*n3)/2 + n_loops, -1 on parity failure
    bool consistent = false;

    std::string to_json() const;
};

// Rebuilds vertex degrees from the stored branches (start anchors plus
// chain-walk terminals, loops counting twice) and checks the branch-count
// law against the observed branch count. Mismatch is reported, not thrown.
CountReport verify_counts(const MinimizedGraph& m);

} // namespace skg

#endif
