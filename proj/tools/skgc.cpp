// skgc: skeleton-graph codec front end.
//
//   skgc encode   in.pbm out.skg [--lossless] [--spur R] [--gap R] [--merge R] [--base3]
//   skgc decode   in.skg out.pbm [--width W]
//   skgc stats    in.skg
//   skgc features in.pbm|in.skg
//   skgc classify probe --train rows.csv [--k N] [--eval rows.csv]
//
// Exit codes: 0 success, 1 I/O or format error, 2 invalid flags.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "skg/codec.hpp"
#include "skg/features.hpp"
#include "skg/render.hpp"
#include "skg/smoothing.hpp"

namespace fs = std::filesystem;
using namespace skg;

namespace {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::invalid_argument, "cannot open " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

// No partial output files: write a sibling temp file, rename on success.
void write_file_atomic(const std::string& path, const std::vector<uint8_t>& bytes) {
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Errc::invalid_argument, "cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) fail(Errc::invalid_argument, "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

bool is_container(const std::vector<uint8_t>& bytes) {
    return bytes.size() >= 4 && bytes[0] == 'S' && bytes[1] == 'K' && bytes[2] == 'G' &&
           bytes[3] == '1';
}

struct SmoothFlags {
    bool lossless = false;
    double spur = -1, gap = -1, merge = -1; // negative: auto (stroke width)
};

SmoothingParams resolve_params(const SmoothFlags& f, double avg_width) {
    SmoothingParams p = SmoothingParams::defaults(
        avg_width, f.lossless ? SmoothMode::lossless : SmoothMode::lossy);
    if (f.spur >= 0) p.spur_length_max = f.spur;
    if (f.gap >= 0) p.gap_bridge_max = f.gap;
    if (f.merge >= 0) p.node_merge_radius = f.merge;
    return p;
}

MinimizedGraph model_from_pbm(const std::vector<uint8_t>& bytes, const SmoothFlags& f) {
    Bitmap b = load_pbm(bytes);
    Skeleton sk = thin(b);
    ContourGraph g = build_graph(sk);
    if (g.degenerate_nodes > 0)
        std::cerr << "warning: " << g.degenerate_nodes << " pixels with index > 4 kept as nodes\n";
    return minimize(smooth(g, resolve_params(f, sk.avg_line_width)));
}

int cmd_encode(const std::string& in, const std::string& out, const SmoothFlags& f, bool base3) {
    auto bytes = read_file(in);
    Bitmap b = load_pbm(bytes);
    MinimizedGraph m = model_from_pbm(bytes, f);
    EncodeStats stats;
    auto container = encode_with_stats(m, base3 ? Packing::base3 : Packing::rle, stats);
    write_file_atomic(out, container);
    size_t in_bytes = packed_raster_bytes(b);
    std::printf("in_bytes=%zu out_bytes=%zu ratio=%.2f\n", in_bytes, container.size(),
                static_cast<double>(in_bytes) / static_cast<double>(container.size()));
    return 0;
}

int cmd_decode(const std::string& in, const std::string& out, const std::string& width) {
    MinimizedGraph m = decode(read_file(in));
    Bitmap skel = rasterize_skeleton(m);
    Bitmap img;
    if (width == "auto")
        img = thicken(skel, std::max(1.0, m.avg_line_width));
    else
        img = thicken(skel, std::stod(width));
    write_file_atomic(out, save_pbm(img));
    return 0;
}

int cmd_stats(const std::string& in) {
    auto bytes = read_file(in);
    MinimizedGraph m = decode(bytes);
    CountReport r = verify_counts(m);

    // payload accounting against the uncompressed 8-bit-per-step baseline
    EncodeStats st;
    encode_with_stats(m, Packing::rle, st);
    size_t total_steps = 0, payload_bits = 0;
    for (size_t i = 0; i < st.chain_lengths.size(); ++i) {
        total_steps += st.chain_lengths[i];
        payload_bits += st.payload_bytes[i] * 8;
    }
    std::printf("{\"anchors\":%zu,\"branches\":%zu,\"n_loops\":%d,"
                "\"eq3\":%s,"
                "\"n1_min\":%lld,\"n3_min\":%lld,\"observed_branches\":%lld,"
                "\"predicted_branches\":%lld,"
                "\"chain_steps\":%zu,\"payload_bits\":%zu,\"baseline_bits\":%zu,"
                "\"container_bytes\":%zu}\n",
                m.anchors.size(), m.branches.size(), m.n_loops,
                r.consistent ? "\"ok\"" : "\"mismatch\"", r.n1_min, r.n3_min, r.observed,
                r.predicted, total_steps, payload_bits, total_steps * 8, bytes.size());
    return r.consistent ? 0 : 1;
}

int cmd_features(const std::string& in, const SmoothFlags& f) {
    auto bytes = read_file(in);
    MinimizedGraph m = is_container(bytes) ? decode(bytes) : model_from_pbm(bytes, f);
    std::printf("%s\n", to_csv(extract_features(m)).c_str());
    return 0;
}

int cmd_classify(const std::string& probe, const std::string& train_path, int k,
                 const std::string& eval_path, const SmoothFlags& f) {
    std::ifstream tf(train_path);
    if (!tf) fail(Errc::invalid_argument, "cannot open " + train_path);
    std::string text((std::istreambuf_iterator<char>(tf)), std::istreambuf_iterator<char>());
    auto training = load_training_csv(text);

    if (!eval_path.empty()) {
        std::ifstream ef(eval_path);
        if (!ef) fail(Errc::invalid_argument, "cannot open " + eval_path);
        std::string etext((std::istreambuf_iterator<char>(ef)), std::istreambuf_iterator<char>());
        auto eval_rows = load_training_csv(etext);
        if (eval_rows.empty()) fail(Errc::invalid_argument, "empty eval set");
        size_t wrong = 0;
        for (const auto& row : eval_rows)
            if (knn_classify(row.v, training, k) != row.label) ++wrong;
        std::printf("evaluated=%zu errors=%zu error_rate=%.4f\n", eval_rows.size(), wrong,
                    static_cast<double>(wrong) / static_cast<double>(eval_rows.size()));
        return 0;
    }

    auto bytes = read_file(probe);
    FeatureVector v;
    if (is_container(bytes))
        v = extract_features(decode(bytes));
    else if (bytes.size() >= 2 && bytes[0] == 'P')
        v = extract_features(model_from_pbm(bytes, f));
    else
        v = feature_from_csv(std::string(bytes.begin(), bytes.end()));
    std::printf("%d\n", knn_classify(v, training, k));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"skeleton-graph codec for contoured raster images"};
    app.require_subcommand(1);

    SmoothFlags flags;
    std::string in, out, width = "auto", train, eval_path;
    bool base3 = false;
    int k = 5;

    auto add_smooth_flags = [&](CLI::App* sub) {
        sub->add_flag("--lossless", flags.lossless, "crossing elimination only");
        sub->add_option("--spur", flags.spur, "spur length threshold (default: stroke width)");
        sub->add_option("--gap", flags.gap, "endpoint bridge distance (default: stroke width)");
        sub->add_option("--merge", flags.merge, "junction merge radius (default: stroke width)");
    };

    CLI::App* enc = app.add_subcommand("encode", "raster to skeleton-graph container");
    enc->add_option("input", in, "PBM input")->required();
    enc->add_option("output", out, "container output")->required();
    add_smooth_flags(enc);
    enc->add_flag("--base3", base3, "exact ternary payload packing instead of RLE");

    CLI::App* dec = app.add_subcommand("decode", "container to raster");
    dec->add_option("input", in, "container input")->required();
    dec->add_option("output", out, "PBM output")->required();
    dec->add_option("--width", width, "stroke width or 'auto' (stored width); 1 = skeleton");

    CLI::App* sta = app.add_subcommand("stats", "container report");
    sta->add_option("input", in, "container input")->required();

    CLI::App* fea = app.add_subcommand("features", "20 structural features as CSV");
    fea->add_option("input", in, "PBM or container input")->required();
    add_smooth_flags(fea);

    CLI::App* cls = app.add_subcommand("classify", "nearest-neighbor label");
    cls->add_option("probe", in, "PBM, container, or feature CSV line file");
    cls->add_option("--train", train, "training rows: label,f0,...,f19")->required();
    cls->add_option("--k", k, "neighbor count");
    cls->add_option("--eval", eval_path, "labeled rows to score instead of a probe");
    add_smooth_flags(cls);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (enc->parsed()) return cmd_encode(in, out, flags, base3);
        if (dec->parsed()) return cmd_decode(in, out, width);
        if (sta->parsed()) return cmd_stats(in);
        if (fea->parsed()) return cmd_features(in, flags);
        if (cls->parsed()) {
            if (in.empty() && eval_path.empty())
                fail(Errc::invalid_argument, "classify needs a probe or --eval");
            return cmd_classify(in, train, k, eval_path, flags);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
