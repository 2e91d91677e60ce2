#include "skg/features.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "skg/render.hpp"

namespace skg {

namespace {

constexpr double kSqrt2 = 1.41421356237309515;

double arc_length(const std::vector<uint8_t>& chain) {
    double len = 0.0;
    for (uint8_t d : chain) len += (d & 1) ? kSqrt2 : 1.0;
    return len;
}

size_t flood_components(const Bitmap& g) {
    std::vector<char> seen(g.pixels.size(), 0);
    size_t components = 0;
    std::deque<std::pair<int, int>> q;
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            size_t p = static_cast<size_t>(y) * g.width + x;
            if (!g.pixels[p] || seen[p]) continue;
            ++components;
            seen[p] = 1;
            q.push_back({x, y});
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop_front();
                for (int d = 0; d < 8; ++d) {
                    int nx = cx + kDirDx[d], ny = cy + kDirDy[d];
                    if (!g.in_bounds(nx, ny) || !g.at(nx, ny)) continue;
                    size_t np = static_cast<size_t>(ny) * g.width + nx;
                    if (!seen[np]) {
                        seen[np] = 1;
                        q.push_back({nx, ny});
                    }
                }
            }
        }
    return components;
}

// Background area unreachable from the border under 4-connectivity; the
// holes that loops enclose.
size_t enclosed_area(const Bitmap& g) {
    const int w = g.width, h = g.height;
    std::vector<char> outside(g.pixels.size(), 0);
    std::deque<std::pair<int, int>> q;
    auto push = [&](int x, int y) {
        size_t p = static_cast<size_t>(y) * w + x;
        if (!g.pixels[p] && !outside[p]) {
            outside[p] = 1;
            q.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) {
        push(x, 0);
        push(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push(0, y);
        push(w - 1, y);
    }
    static constexpr int ortho[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop_front();
        for (auto& o : ortho) {
            int nx = x + o[0], ny = y + o[1];
            if (nx >= 0 && nx < w && ny >= 0 && ny < h) push(nx, ny);
        }
    }
    size_t area = 0;
    for (size_t p = 0; p < g.pixels.size(); ++p)
        if (!g.pixels[p] && !outside[p]) ++area;
    return area;
}

} // namespace

long long loop_count(const MinimizedGraph& m) {
    if (m.anchors.empty() && m.branches.empty()) return 0;
    Bitmap skel = rasterize_skeleton(m);
    ContourGraph g = build_graph(Skeleton{skel, m.avg_line_width});
    long long b = static_cast<long long>(g.branches.size());
    long long n = static_cast<long long>(g.nodes.size());
    long long c = static_cast<long long>(flood_components(skel));
    return b - n + c;
}

FeatureVector extract_features(const MinimizedGraph& m) {
    FeatureVector f;
    if (m.anchors.empty() && m.branches.empty()) return f;

    Bitmap skel = rasterize_skeleton(m);
    ContourGraph g = build_graph(Skeleton{skel, m.avg_line_width});

    long long n1 = 0, n3 = 0;
    for (const Node& n : g.nodes) {
        if (n.loop_start) continue;
        if (n.index == 1) ++n1;
        if (n.index == 3) ++n3;
    }
    long long comps = static_cast<long long>(flood_components(skel));
    f.values[0] = static_cast<double>(n1);
    f.values[1] = static_cast<double>(n3);
    f.values[2] = static_cast<double>(static_cast<long long>(g.branches.size()) -
                                      static_cast<long long>(g.nodes.size()) + comps);
    f.values[3] = static_cast<double>(g.branches.size());

    // Bounding box and centroid of the skeleton foreground.
    int minx = m.width, miny = m.height, maxx = -1, maxy = -1;
    double cx = 0, cy = 0;
    size_t fg = 0;
    for (int y = 0; y < skel.height; ++y)
        for (int x = 0; x < skel.width; ++x) {
            if (!skel.at(x, y)) continue;
            minx = std::min(minx, x);
            maxx = std::max(maxx, x);
            miny = std::min(miny, y);
            maxy = std::max(maxy, y);
            cx += x;
            cy += y;
            ++fg;
        }
    if (fg == 0) return FeatureVector{};
    cx /= static_cast<double>(fg);
    cy /= static_cast<double>(fg);
    double bw = maxx - minx + 1, bh = maxy - miny + 1;
    double diag = std::sqrt(bw * bw + bh * bh);

    double total_len = 0, longest = 0;
    for (const MinBranch& b : m.branches) {
        double len = arc_length(b.chain);
        total_len += len;
        longest = std::max(longest, len);
    }
    f.values[4] = total_len > 0 ? longest / total_len : 0.0;
    f.values[5] = total_len / diag;
    f.values[6] = (cx - (minx + maxx) / 2.0) / diag;
    f.values[7] = (cy - (miny + maxy) / 2.0) / diag;
    f.values[8] = std::min(bw, bh) / std::max(bw, bh);

    // Straightness: chord over arc length per branch.
    long long straight = 0;
    double ratio_sum = 0;
    size_t measured = 0;
    for (const MinBranch& b : m.branches) {
        if (b.chain.empty()) continue;
        const Anchor& a = m.anchors[b.anchor];
        int x = a.x, y = a.y;
        for (uint8_t d : b.chain) {
            x += kDirDx[d];
            y += kDirDy[d];
        }
        double chord = std::hypot(x - a.x, y - a.y);
        double ratio = chord / arc_length(b.chain);
        if (ratio >= 0.95) ++straight;
        ratio_sum += ratio;
        ++measured;
    }
    f.values[9] = static_cast<double>(straight);
    f.values[10] = measured ? ratio_sum / static_cast<double>(measured) : 0.0;
    f.values[11] = static_cast<double>(enclosed_area(skel)) / (bw * bh);

    // Pairwise anchor distance statistics.
    if (m.anchors.size() >= 2) {
        std::vector<double> dists;
        for (size_t i = 0; i < m.anchors.size(); ++i)
            for (size_t j = i + 1; j < m.anchors.size(); ++j)
                dists.push_back(std::hypot(m.anchors[i].x - m.anchors[j].x,
                                           m.anchors[i].y - m.anchors[j].y));
        double mn = *std::min_element(dists.begin(), dists.end());
        double mx = *std::max_element(dists.begin(), dists.end());
        double mean = std::accumulate(dists.begin(), dists.end(), 0.0) / dists.size();
        double var = 0;
        for (double d : dists) var += (d - mean) * (d - mean);
        var /= dists.size();
        f.values[12] = mn / diag;
        f.values[13] = mx / diag;
        f.values[14] = mean / diag;
        f.values[15] = std::sqrt(var) / diag;
    }

    // Net turn statistics over branch chains.
    double net_sum = 0, net_abs_sum = 0;
    size_t turn_branches = 0;
    for (const MinBranch& b : m.branches) {
        if (b.chain.empty()) continue;
        double net = 0;
        for (size_t i = 1; i < b.chain.size(); ++i)
            net += turn_delta(b.chain[i - 1], b.chain[i]);
        double per_step = net / static_cast<double>(b.chain.size());
        net_sum += per_step;
        net_abs_sum += std::abs(per_step);
        ++turn_branches;
    }
    f.values[16] = turn_branches ? net_sum / static_cast<double>(turn_branches) : 0.0;
    f.values[17] = turn_branches ? net_abs_sum / static_cast<double>(turn_branches) : 0.0;

    // Node-to-centroid distances from the re-derived graph.
    double ep_sum = 0, jn_sum = 0;
    long long ep_n = 0, jn_n = 0;
    for (const Node& n : g.nodes) {
        if (n.loop_start) continue;
        double d = std::hypot(n.x - cx, n.y - cy);
        if (n.index == 1) {
            ep_sum += d;
            ++ep_n;
        } else if (n.index == 3) {
            jn_sum += d;
            ++jn_n;
        }
    }
    f.values[18] = ep_n ? ep_sum / ep_n / diag : 0.0;
    f.values[19] = jn_n ? jn_sum / jn_n / diag : 0.0;
    return f;
}

int knn_classify(const FeatureVector& probe, const std::vector<LabeledFeature>& training, int k) {
    if (training.empty()) fail(Errc::invalid_argument, "knn: empty training set");
    if (k < 1 || static_cast<size_t>(k) > training.size())
        fail(Errc::invalid_argument, "knn: k out of range");

    // Per-dimension z-score statistics from the training set only.
    std::array<double, 20> mean{}, sdev{};
    for (const auto& s : training)
        for (size_t d = 0; d < 20; ++d) mean[d] += s.v.values[d];
    for (size_t d = 0; d < 20; ++d) mean[d] /= static_cast<double>(training.size());
    for (const auto& s : training)
        for (size_t d = 0; d < 20; ++d) {
            double e = s.v.values[d] - mean[d];
            sdev[d] += e * e;
        }
    for (size_t d = 0; d < 20; ++d) sdev[d] = std::sqrt(sdev[d] / static_cast<double>(training.size()));

    auto dist = [&](const FeatureVector& a, const FeatureVector& b) {
        double s = 0;
        for (size_t d = 0; d < 20; ++d) {
            if (sdev[d] <= 0) continue; // constant dimension carries no signal
            double e = (a.values[d] - b.values[d]) / sdev[d];
            s += e * e;
        }
        return std::sqrt(s);
    };

    std::vector<std::pair<double, size_t>> order(training.size());
    for (size_t i = 0; i < training.size(); ++i) order[i] = {dist(probe, training[i].v), i};
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });

    std::map<int, std::pair<int, double>> votes; // label -> (count, distance sum)
    for (int i = 0; i < k; ++i) {
        const auto& [d, idx] = order[static_cast<size_t>(i)];
        auto& v = votes[training[idx].label];
        v.first += 1;
        v.second += d;
    }
    int best_label = votes.begin()->first;
    int best_count = -1;
    double best_mean = 0;
    for (const auto& [label, cv] : votes) {
        double md = cv.second / cv.first;
        if (cv.first > best_count ||
            (cv.first == best_count && (md < best_mean || (md == best_mean && label < best_label)))) {
            best_label = label;
            best_count = cv.first;
            best_mean = md;
        }
    }
    return best_label;
}

std::string to_csv(const FeatureVector& v) {
    std::ostringstream os;
    for (size_t i = 0; i < 20; ++i) {
        if (i) os << ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", v.values[i]);
        os << buf;
    }
    return os.str();
}

FeatureVector feature_from_csv(const std::string& line) {
    FeatureVector v;
    std::istringstream is(line);
    std::string tok;
    for (size_t i = 0; i < 20; ++i) {
        if (!std::getline(is, tok, ','))
            fail(Errc::invalid_argument, "feature_from_csv: expected 20 values");
        v.values[i] = std::stod(tok);
    }
    return v;
}

std::vector<LabeledFeature> load_training_csv(const std::string& text) {
    std::vector<LabeledFeature> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(Errc::invalid_argument, "training csv: malformed row");
        LabeledFeature lf;
        lf.label = std::stoi(line.substr(0, comma));
        lf.v = feature_from_csv(line.substr(comma + 1));
        out.push_back(lf);
    }
    return out;
}

} // namespace skg
