#include "skg/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

namespace skg {

namespace {

constexpr char kMagic[4] = {'S', 'K', 'G', '1'};
constexpr size_t kHeaderSize = 17;

void put_u16(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xFF));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
}
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    put_u16(out, v & 0xFFFF);
    put_u16(out, v >> 16);
}

struct Reader {
    std::span<const uint8_t> data;
    size_t pos = 0;

    void need(size_t n, const char* what) const {
        if (pos + n > data.size()) fail(Errc::truncated, std::string("decode: truncated ") + what);
    }
    uint8_t u8(const char* what) {
        need(1, what);
        return data[pos++];
    }
    uint32_t u16(const char* what) {
        need(2, what);
        uint32_t v = data[pos] | (static_cast<uint32_t>(data[pos + 1]) << 8);
        pos += 2;
        return v;
    }
    uint32_t u32(const char* what) {
        uint32_t lo = u16(what), hi = u16(what);
        return lo | (hi << 16);
    }
};

} // namespace

RelativeChain relativize(const std::vector<uint8_t>& chain) {
    RelativeChain rc;
    if (chain.empty()) return rc;
    rc.initial_heading = chain.front();
    rc.turns.reserve(chain.size() - 1);
    for (size_t i = 1; i < chain.size(); ++i) {
        int d = turn_delta(chain[i - 1], chain[i]);
        if (d < -1 || d > 1)
            fail(Errc::sharp_turn, "relativize: consecutive directions differ by more than 45 degrees");
        rc.turns.push_back(static_cast<int8_t>(d));
    }
    return rc;
}

std::vector<uint8_t> replay(const RelativeChain& rc) {
    std::vector<uint8_t> chain;
    chain.reserve(rc.turns.size() + 1);
    int d = rc.initial_heading;
    chain.push_back(static_cast<uint8_t>(d));
    for (int8_t t : rc.turns) {
        d = (d + t + 8) & 7;
        chain.push_back(static_cast<uint8_t>(d));
    }
    return chain;
}

std::vector<RleToken> rle_encode(const std::vector<int8_t>& turns) {
    std::vector<RleToken> tokens;
    size_t i = 0;
    while (i < turns.size()) {
        int8_t sym = turns[i];
        size_t run = 1;
        while (i + run < turns.size() && turns[i + run] == sym && run < 64) ++run;
        tokens.push_back({sym, static_cast<uint8_t>(run)});
        i += run;
    }
    return tokens;
}

std::vector<int8_t> rle_decode(const std::vector<RleToken>& tokens) {
    std::vector<int8_t> turns;
    for (const RleToken& t : tokens) {
        if (t.run == 0) fail(Errc::corrupt_token, "rle_decode: zero run length");
        turns.insert(turns.end(), t.run, t.symbol);
    }
    return turns;
}

std::vector<uint8_t> pack(const std::vector<RleToken>& tokens) {
    std::vector<uint8_t> out;
    out.reserve(tokens.size());
    for (const RleToken& t : tokens) {
        uint8_t code = static_cast<uint8_t>(t.symbol + 1); // 00=-1, 01=0, 10=+1
        out.push_back(static_cast<uint8_t>((code << 6) | ((t.run - 1) & 0x3F)));
    }
    return out;
}

std::vector<RleToken> unpack(std::span<const uint8_t> bytes, size_t expected_turns) {
    std::vector<RleToken> tokens;
    size_t covered = 0, i = 0;
    while (covered < expected_turns) {
        if (i >= bytes.size()) fail(Errc::truncated, "unpack: payload ends before chain");
        uint8_t b = bytes[i++];
        uint8_t code = b >> 6;
        if (code > 2) fail(Errc::corrupt_token, "unpack: invalid symbol code");
        RleToken t{static_cast<int8_t>(static_cast<int>(code) - 1),
                   static_cast<uint8_t>((b & 0x3F) + 1)};
        covered += t.run;
        if (covered > expected_turns) fail(Errc::corrupt_token, "unpack: runs overshoot chain length");
        tokens.push_back(t);
    }
    return tokens;
}

std::vector<uint8_t> pack_base3(const std::vector<int8_t>& turns) {
    // Little-endian big integer; most significant trit processed first.
    std::vector<uint8_t> n;
    for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
        uint32_t carry = static_cast<uint32_t>(*it + 1);
        for (uint8_t& byte : n) {
            uint32_t v = byte * 3u + carry;
            byte = static_cast<uint8_t>(v & 0xFF);
            carry = v >> 8;
        }
        while (carry) {
            n.push_back(static_cast<uint8_t>(carry & 0xFF));
            carry >>= 8;
        }
    }
    return n;
}

std::vector<int8_t> unpack_base3(std::span<const uint8_t> bytes, size_t expected_turns) {
    std::vector<uint8_t> n(bytes.begin(), bytes.end());
    std::vector<int8_t> turns(expected_turns, 0);
    for (size_t i = 0; i < expected_turns; ++i) {
        uint32_t rem = 0;
        for (size_t k = n.size(); k-- > 0;) {
            uint32_t cur = (rem << 8) | n[k];
            n[k] = static_cast<uint8_t>(cur / 3);
            rem = cur % 3;
        }
        turns[i] = static_cast<int8_t>(static_cast<int>(rem) - 1);
        while (!n.empty() && n.back() == 0) n.pop_back();
    }
    if (!n.empty()) fail(Errc::corrupt_token, "unpack_base3: payload larger than chain");
    return turns;
}

double quantize_width(double w) {
    double q = std::round(w * 256.0) / 256.0;
    if (q < 0.0) q = 0.0;
    if (q > 65535.0 / 256.0) q = 65535.0 / 256.0;
    return q;
}

namespace {

struct TableBranch {
    uint32_t anchor = 0;
    std::vector<uint8_t> chain;
};

} // namespace

std::vector<uint8_t> encode_with_stats(const MinimizedGraph& m, Packing packing, EncodeStats& stats) {
    if (m.width <= 0 || m.height <= 0 || m.width >= 65536 || m.height >= 65536)
        fail(Errc::too_large, "encode: dimensions must fit 16 bits");

    std::vector<Anchor> anchors = m.anchors;
    std::vector<TableBranch> branches;
    branches.reserve(m.branches.size());

    // Split chains at sharp turns; each split point becomes a synthetic
    // anchor appended after the real ones so decode can strip them again.
    for (const MinBranch& b : m.branches) {
        const Anchor& a = m.anchors[b.anchor];
        int x = a.x, y = a.y;
        uint32_t cur_anchor = static_cast<uint32_t>(b.anchor);
        std::vector<uint8_t> seg;
        for (size_t i = 0; i < b.chain.size(); ++i) {
            if (i > 0) {
                int d = turn_delta(b.chain[i - 1], b.chain[i]);
                if (d < -1 || d > 1) {
                    branches.push_back({cur_anchor, seg});
                    seg.clear();
                    Anchor split;
                    split.id = static_cast<int>(anchors.size());
                    split.x = x;
                    split.y = y;
                    split.index = 2;
                    anchors.push_back(split);
                    cur_anchor = static_cast<uint32_t>(split.id);
                }
            }
            seg.push_back(b.chain[i]);
            x += kDirDx[b.chain[i]];
            y += kDirDy[b.chain[i]];
        }
        branches.push_back({cur_anchor, std::move(seg)});
    }

    if (anchors.size() > 65535) fail(Errc::too_large, "encode: too many anchors");
    if (branches.size() > 65535) fail(Errc::too_large, "encode: too many branches");

    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(static_cast<uint8_t>(packing));
    put_u16(out, static_cast<uint32_t>(m.width));
    put_u16(out, static_cast<uint32_t>(m.height));
    put_u16(out, static_cast<uint32_t>(std::lround(quantize_width(m.avg_line_width) * 256.0)));
    put_u16(out, static_cast<uint32_t>(anchors.size()));
    put_u16(out, static_cast<uint32_t>(branches.size()));
    put_u16(out, static_cast<uint32_t>(m.n_loops));

    for (const Anchor& a : anchors) {
        put_u16(out, static_cast<uint32_t>(a.x));
        put_u16(out, static_cast<uint32_t>(a.y));
        out.push_back(static_cast<uint8_t>(a.index));
    }

    stats.payload_bytes.clear();
    stats.chain_lengths.clear();
    for (const TableBranch& b : branches) {
        put_u16(out, b.anchor);
        RelativeChain rc = relativize(b.chain);
        out.push_back(rc.initial_heading);
        put_u32(out, static_cast<uint32_t>(b.chain.size()));
        size_t payload = 0;
        if (packing == Packing::rle) {
            auto bytes = pack(rle_encode(rc.turns));
            payload = bytes.size();
            out.insert(out.end(), bytes.begin(), bytes.end());
        } else {
            auto bytes = pack_base3(rc.turns);
            payload = bytes.size();
            put_u32(out, static_cast<uint32_t>(bytes.size()));
            out.insert(out.end(), bytes.begin(), bytes.end());
        }
        stats.payload_bytes.push_back(payload);
        stats.chain_lengths.push_back(b.chain.size());
    }
    stats.total_bytes = out.size();
    return out;
}

std::vector<uint8_t> encode(const MinimizedGraph& m, Packing packing) {
    EncodeStats stats;
    return encode_with_stats(m, packing, stats);
}

MinimizedGraph decode(std::span<const uint8_t> bytes) {
    Reader r{bytes};
    r.need(kHeaderSize, "header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        fail(Errc::bad_magic, "decode: bad magic");
    r.pos = 4;
    uint8_t version = r.u8("version");
    if (version != 1 && version != 2)
        fail(Errc::version_unsupported, "decode: unsupported version");
    Packing packing = static_cast<Packing>(version);

    MinimizedGraph m;
    m.width = static_cast<int>(r.u16("width"));
    m.height = static_cast<int>(r.u16("height"));
    if (m.width == 0 || m.height == 0) fail(Errc::count_mismatch, "decode: zero dimensions");
    m.avg_line_width = r.u16("line width") / 256.0;
    uint32_t anchor_count = r.u16("anchor count");
    uint32_t branch_count = r.u16("branch count");
    m.n_loops = static_cast<int>(r.u16("loop count"));

    for (uint32_t i = 0; i < anchor_count; ++i) {
        Anchor a;
        a.id = static_cast<int>(i);
        a.x = static_cast<int>(r.u16("anchor x"));
        a.y = static_cast<int>(r.u16("anchor y"));
        a.index = r.u8("anchor index");
        if (a.x >= m.width || a.y >= m.height)
            fail(Errc::out_of_bounds, "decode: anchor outside image");
        m.anchors.push_back(a);
    }

    const size_t chain_cap = static_cast<size_t>(m.width) * m.height * 8 + 64;
    for (uint32_t i = 0; i < branch_count; ++i) {
        uint32_t anchor = r.u16("branch anchor");
        if (anchor >= anchor_count) fail(Errc::corrupt_token, "decode: branch references missing anchor");
        uint8_t heading = r.u8("branch heading");
        if (heading > 7) fail(Errc::corrupt_token, "decode: invalid heading");
        uint32_t length = r.u32("chain length");
        if (length > chain_cap) fail(Errc::corrupt_token, "decode: absurd chain length");
        size_t turns_expected = length > 0 ? length - 1 : 0;

        RelativeChain rc;
        rc.initial_heading = heading;
        if (packing == Packing::rle) {
            // Token stream is self-framing: read until the chain is covered.
            std::span<const uint8_t> rest(bytes.data() + r.pos, bytes.size() - r.pos);
            auto tokens = unpack(rest, turns_expected);
            size_t used = tokens.size(); // one byte per token
            r.pos += used;
            rc.turns = rle_decode(tokens);
        } else {
            uint32_t nbytes = r.u32("payload size");
            r.need(nbytes, "payload");
            rc.turns = unpack_base3(std::span<const uint8_t>(bytes.data() + r.pos, nbytes),
                                    turns_expected);
            r.pos += nbytes;
        }

        MinBranch b;
        b.id = static_cast<int>(i);
        b.anchor = static_cast<int>(anchor);
        if (length > 0) b.chain = replay(rc);
        m.branches.push_back(std::move(b));
    }

    if (r.pos != bytes.size()) fail(Errc::count_mismatch, "decode: trailing bytes");

    // Walk every chain: bounds check and vertex degrees.
    std::map<std::pair<int, int>, int> degree;
    std::vector<std::pair<int, int>> terminal(m.branches.size());
    for (const MinBranch& b : m.branches) {
        const Anchor& a = m.anchors[b.anchor];
        int x = a.x, y = a.y;
        degree[{x, y}] += 1;
        for (uint8_t d : b.chain) {
            x += kDirDx[d];
            y += kDirDy[d];
            if (x < 0 || x >= m.width || y < 0 || y >= m.height)
                fail(Errc::out_of_bounds, "decode: chain walk leaves image");
        }
        terminal[b.id] = {x, y};
        degree[{x, y}] += 1;
    }

    // Strip the sharp-turn split anchors the encoder introduced. Split
    // segments are emitted consecutively, so a seam is an index-2 anchor
    // referenced by exactly one branch whose table predecessor terminates
    // on the seam pixel; sew such a branch back onto its predecessor.
    std::vector<int> refs(m.anchors.size(), 0);
    for (const MinBranch& b : m.branches) refs[b.anchor] += 1;
    for (size_t i = 1; i < m.branches.size();) {
        const MinBranch& tail = m.branches[i];
        const Anchor& seam = m.anchors[tail.anchor];
        bool is_seam = seam.index == 2 && refs[tail.anchor] == 1 &&
                       tail.anchor != m.branches[i - 1].anchor &&
                       terminal[i - 1] == std::pair(seam.x, seam.y);
        if (!is_seam) {
            ++i;
            continue;
        }
        int seam_ordinal = tail.anchor;
        m.branches[i - 1].chain.insert(m.branches[i - 1].chain.end(), tail.chain.begin(),
                                       tail.chain.end());
        terminal[i - 1] = terminal[i];
        m.branches.erase(m.branches.begin() + i);
        terminal.erase(terminal.begin() + i);
        m.anchors.erase(m.anchors.begin() + seam_ordinal);
        refs.erase(refs.begin() + seam_ordinal);
        for (MinBranch& b : m.branches)
            if (b.anchor > seam_ordinal) --b.anchor;
        // stay at position i: the next segment of a multi-split chain now
        // follows the grown predecessor
    }
    for (size_t k = 0; k < m.branches.size(); ++k) m.branches[k].id = static_cast<int>(k);
    for (size_t k = 0; k < m.anchors.size(); ++k) m.anchors[k].id = static_cast<int>(k);

    // Validate the reconstructed (sewn) structure. Degrees: one per branch
    // start, one per chain terminal.
    degree.clear();
    for (const MinBranch& b : m.branches) {
        const Anchor& a = m.anchors[b.anchor];
        degree[{a.x, a.y}] += 1;
        degree[terminal[b.id]] += 1;
    }
    long long d1 = 0, d2 = 0, d3 = 0;
    for (const auto& [pt, deg] : degree) {
        if (deg == 1) ++d1;
        else if (deg == 2) ++d2;
        else if (deg == 3) ++d3;
    }
    long long s = d1 + 3 * d3;
    if (s % 2 != 0 || s / 2 + d2 != static_cast<long long>(m.branches.size()))
        fail(Errc::count_mismatch, "decode: branch count violates the node-count law");

    // Stored loop count must match actual closed contours: branches closing
    // onto a degree-2 anchor. Loops hanging off junctions (degree 3) are
    // ordinary branches, not counted.
    long long rings = 0;
    for (const MinBranch& b : m.branches) {
        const Anchor& a = m.anchors[b.anchor];
        if (!b.chain.empty() && terminal[b.id] == std::pair(a.x, a.y) &&
            degree[{a.x, a.y}] == 2)
            ++rings;
    }
    if (rings != m.n_loops)
        fail(Errc::count_mismatch, "decode: stored loop count does not match closed contours");

    return m;
}

MinimizedGraph decode(const std::vector<uint8_t>& bytes) {
    return decode(std::span<const uint8_t>(bytes.data(), bytes.size()));
}

} // namespace skg
