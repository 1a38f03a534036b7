#pragma once

#include <cstdint>
#include <vector>

#include "flyclient/codec/encoding.hpp"

namespace flyclient {

enum class ProofStyle : std::uint8_t { kPerSample = 0, kCumulative = 1 };
enum class Variant : std::uint8_t { kReference = 0, kFixedDifficulty = 1, kCacheLess = 2 };

const char* to_string(ProofStyle s);
const char* to_string(Variant v);
ProofStyle proof_style_from_string(const std::string& name);
Variant variant_from_string(const std::string& name);

// One prover answer. `key` is the height, node index, or queried work.
struct BundleEntry {
  ItemKind kind = ItemKind::kHeader;
  std::uint32_t branch = 0;
  U256 key = 0;
  Bytes payload;

  bool operator==(const BundleEntry&) const = default;
};

struct NiProof {
  ProofFormat format = ProofFormat::kNormal;
  NodeFormat node_format = NodeFormat::kZcash;
  ProofStyle style = ProofStyle::kCumulative;
  Variant variant = Variant::kReference;
  Hash32 manifest_digest;
  std::vector<BundleEntry> entries;

  bool operator==(const NiProof&) const = default;
};

Bytes encode_bundle(const std::vector<BundleEntry>& entries);
std::vector<BundleEntry> decode_bundle(ByteSpan data);

nlohmann::json entry_to_json(const BundleEntry& e, ProofFormat format, NodeFormat node_format);
BundleEntry entry_from_json(const nlohmann::json& j, ProofFormat format, NodeFormat node_format);

// File layout (little-endian):
//   magic "FLNI" | version u16 | encoding u8 | format u8 | style u8 | variant u8
//   | node format u8 | reserved u8 | manifest digest [32] | bundle
// The bundle is binary, JSON text, or gzip of the binary bundle.
inline constexpr std::size_t kNiFilePrefix = 44;
Bytes encode_ni_file(const NiProof& proof, Representation encoding, int gzip_level = 6);
NiProof decode_ni_file(ByteSpan data);

// Size of the bundle alone under a representation (zipped = whole-proof gzip).
std::uint64_t ni_bundle_size(const NiProof& proof, Representation representation,
                             int gzip_level = 6);
// Sum of per-entry gzip sizes, for comparison with whole-proof compression.
std::uint64_t ni_piecewise_zipped_size(const NiProof& proof, int gzip_level = 6);

}  // namespace flyclient
