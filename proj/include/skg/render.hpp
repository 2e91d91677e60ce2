#ifndef SKG_RENDER_HPP
#define SKG_RENDER_HPP

#include "skg/graph.hpp"
#include "skg/minimize.hpp"

namespace skg {

// Plots every anchor pixel and every pixel visited by the branch walks.
// Throws out_of_bounds when a walk leaves the declared dimensions.
Bitmap rasterize_skeleton(const MinimizedGraph& m);

// Same for a contour graph (node pixels plus branch walks).
Bitmap rasterize_graph(const ContourGraph& g);

// Morphological dilation by a disc of radius (width - 1) / 2, radius
// rounded to the nearest half pixel. width 1.0 is the identity.
Bitmap thicken(const Bitmap& skel, double width, Exec exec = Exec::parallel);

} // namespace skg

#endif
