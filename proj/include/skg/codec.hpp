#ifndef SKG_CODEC_HPP
#define SKG_CODEC_HPP

#include <span>

#include "skg/minimize.hpp"

namespace skg {

// A branch chain as an initial heading plus per-step heading changes of
// -1, 0 or +1 (in 45-degree units). Replaying the turns from the heading
// reproduces the absolute chain exactly.
struct RelativeChain {
    uint8_t initial_heading = 0;
    std::vector<int8_t> turns;

    friend bool operator==(const RelativeChain&, const RelativeChain&) = default;
};

// Throws sharp_turn when consecutive directions differ by more than 45
// degrees; the encoder splits branches at such pixels instead (see encode).
RelativeChain relativize(const std::vector<uint8_t>& chain);

// Inverse of relativize.
std::vector<uint8_t> replay(const RelativeChain& rc);

struct RleToken {
    int8_t symbol = 0; // -1, 0, +1
    uint8_t run = 1;   // 1..64

    friend bool operator==(const RleToken&, const RleToken&) = default;
};

std::vector<RleToken> rle_encode(const std::vector<int8_t>& turns);
// Throws corrupt_token on a zero run length.
std::vector<int8_t> rle_decode(const std::vector<RleToken>& tokens);

// One byte per token: 2-bit symbol code (00=-1, 01=0, 10=+1) in the high
// bits, then run_length - 1 in the low 6 bits.
std::vector<uint8_t> pack(const std::vector<RleToken>& tokens);
// Reads tokens until expected_turns are accounted for. Throws truncated
// when bytes run out, corrupt_token on code 11 or run overshoot.
std::vector<RleToken> unpack(std::span<const uint8_t> bytes, size_t expected_turns);

// Exact ternary packer: the turn sequence is one base-3 number serialized
// little-endian with high zero bytes trimmed, so a chain of length L costs
// at most ceil(L*log2(3)) + 7 bits.
std::vector<uint8_t> pack_base3(const std::vector<int8_t>& turns);
std::vector<int8_t> unpack_base3(std::span<const uint8_t> bytes, size_t expected_turns);

// Payload codec selector, stored in the container version byte.
enum class Packing : uint8_t { rle = 1, base3 = 2 };

// 8.8 fixed-point width stored in the container.
double quantize_width(double w);

// Serializes to the SKG1 container. Branches whose chains turn sharper than
// 45 degrees are split at the sharp pixel into segments sharing a synthetic
// anchor (index 2); decode rejoins them. Little-endian throughout.
// Throws too_large when dimensions or table sizes exceed 16-bit fields.
std::vector<uint8_t> encode(const MinimizedGraph& m, Packing packing = Packing::rle);

// Parses and validates a container: magic, version, payload framing, the
// branch-count law over the reconstructed vertex degrees, and the stored
// loop count against actual closed contours.
MinimizedGraph decode(std::span<const uint8_t> bytes);
MinimizedGraph decode(const std::vector<uint8_t>& bytes);

// Per-branch payload byte counts of the last encode (chain order), for
// size reporting.
struct EncodeStats {
    std::vector<size_t> payload_bytes;
    std::vector<size_t> chain_lengths;
    size_t total_bytes = 0;
};
std::vector<uint8_t> encode_with_stats(const MinimizedGraph& m, Packing packing, EncodeStats& stats);

} // namespace skg

#endif
