#ifndef SKG_THINNING_HPP
#define SKG_THINNING_HPP

#include "skg/bitmap.hpp"

namespace skg {

// One-pixel-wide skeleton plus the stroke width measured while thinning.
// The grid is always a subset of the source foreground.
struct Skeleton {
    Bitmap grid;
    double avg_line_width = 1.0;
};

// Kernel selection. Both produce bit-identical output; `parallel` uses
// OpenMP when compiled in and falls back to serial otherwise.
enum class Exec { serial, parallel };

// Safe-point thinning: iterative directional sub-passes (N, S, E, W) over
// the edge-point deletability tests, run to a fixed point, followed by a
// sequential cleanup that removes redundant pixels of remaining 2x2 blocks.
// Preserves 8-connectivity of every component and all stroke endpoints.
Skeleton thin(const Bitmap& b, Exec exec = Exec::parallel);

// Foreground-area ratio: |source| / |skel|, 1.0 for an empty skeleton.
double measure_line_width(const Bitmap& source, const Bitmap& skel);

namespace detail {
// One directional sub-pass: flags deletable edge points of `dir`
// (0=N,1=S,2=E,3=W) from a snapshot of the grid, then clears them.
// Returns the number of deleted pixels. Exposed for tests and benchmarks.
size_t thin_subpass(Bitmap& grid, int dir, std::vector<uint8_t>& flags, Exec exec);
} // namespace detail

} // namespace skg

#endif
