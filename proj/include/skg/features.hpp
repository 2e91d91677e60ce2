#ifndef SKG_FEATURES_HPP
#define SKG_FEATURES_HPP

#include <array>
#include <string>

#include "skg/minimize.hpp"

namespace skg {

// Structural feature vector, all slots either topology counts or
// dimensionless ratios. Layout is frozen:
//   f0  endpoint count          f1  junction count
//   f2  loop count (cycle rank) f3  branch count
//   f4  longest branch / total length
//   f5  total length / bounding-box diagonal
//   f6  centroid x offset / diagonal
//   f7  centroid y offset / diagonal
//   f8  bounding-box min/max side ratio
//   f9  straight-stroke count (chord/arc >= 0.95)
//   f10 mean chord/arc ratio
//   f11 enclosed area / bounding-box area
//   f12..f15 pairwise anchor distance min/max/mean/stddev / diagonal
//   f16 mean net turn per step      f17 mean |net turn| per step
//   f18 endpoint-to-centroid mean distance / diagonal
//   f19 junction-to-centroid mean distance / diagonal
struct FeatureVector {
    std::array<double, 20> values{};

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector extract_features(const MinimizedGraph& m);

// Cycle rank B - N + C of the graph re-derived from the rendered skeleton
// (pixel coincidence decides the junctions, as on the decode side).
long long loop_count(const MinimizedGraph& m);

struct LabeledFeature {
    FeatureVector v;
    int label = 0;
};

// Majority vote among the k nearest training vectors under per-dimension
// z-score normalized Euclidean distance (statistics from the training set).
// Ties break toward the smaller mean distance, then the smaller label.
// Throws invalid_argument on empty training or k out of range.
int knn_classify(const FeatureVector& probe, const std::vector<LabeledFeature>& training, int k);

// CLI formats: 20 comma-separated decimals; training rows "label,f0,...,f19".
std::string to_csv(const FeatureVector& v);
FeatureVector feature_from_csv(const std::string& line);
std::vector<LabeledFeature> load_training_csv(const std::string& text);

} // namespace skg

#endif
