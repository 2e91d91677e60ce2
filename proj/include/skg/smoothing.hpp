#ifndef SKG_SMOOTHING_HPP
#define SKG_SMOOTHING_HPP

#include "skg/graph.hpp"

namespace skg {

enum class SmoothMode { lossless, lossy };

// Thresholds scale with the measured stroke width; noise the smoothing
// exists to remove lives at that scale.
struct SmoothingParams {
    double spur_length_max = 1.0;
    double gap_bridge_max = 1.0;
    double node_merge_radius = 1.0;
    SmoothMode mode = SmoothMode::lossy;

    static SmoothingParams defaults(double avg_line_width,
                                    SmoothMode mode = SmoothMode::lossy) {
        SmoothingParams p;
        p.spur_length_max = avg_line_width;
        p.gap_bridge_max = avg_line_width;
        p.node_merge_radius = avg_line_width;
        p.mode = mode;
        return p;
    }
};

// Lossless mode applies only crossing elimination: every index-4 (or higher)
// node is dissolved into pass-through branch joins paired by minimal turning
// angle; the rendered pixel set is unchanged and the call is idempotent.
//
// Lossy mode additionally removes short spur branches hanging off junctions,
// merges junction pairs that one true junction split into, and bridges
// nearby endpoint pairs with straight chains. Lossy edits operate on the
// rendered raster and the graph is rebuilt between passes, so indexes stay
// honest; the loop runs to a fixed point (at most 10 passes).
ContourGraph smooth(const ContourGraph& g, const SmoothingParams& p);

} // namespace skg

#endif
