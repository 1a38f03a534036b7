#pragma once

#include <cstdint>

#include "flyclient/core/bytes.hpp"
#include "flyclient/core/work.hpp"

namespace flyclient {

// Node wire layouts. Zcash emulation carries the Sapling/Orchard auxiliary
// fields in clear; the distilled layout replaces them with one digest.
enum class NodeFormat : std::uint8_t { kZcash = 0, kDistilled = 1 };

const char* to_string(NodeFormat format);

struct AuxFields {
  Hash32 earliest_sapling_root;
  Hash32 latest_sapling_root;
  std::uint64_t sapling_tx_count = 0;
  Hash32 earliest_orchard_root;
  Hash32 latest_orchard_root;
  std::uint64_t orchard_tx_count = 0;

  bool operator==(const AuxFields&) const = default;
};

struct MmrNode {
  Hash32 commitment;
  std::uint32_t earliest_time = 0;
  std::uint32_t latest_time = 0;
  std::uint32_t earliest_bits = 0;
  std::uint32_t latest_bits = 0;
  std::uint64_t earliest_height = 0;
  std::uint64_t latest_height = 0;
  U256 work = 0;
  AuxFields aux;
  Hash32 other_fields_hash;
  std::uint32_t branch_id = 0;

  std::uint64_t leaf_span() const { return latest_height - earliest_height + 1; }
  bool operator==(const MmrNode&) const = default;
};

// Everything a verifier can read off a header to rebuild its leaf.
struct LeafMeta {
  Hash32 digest;
  std::uint32_t time = 0;
  std::uint32_t bits = 0;
  std::uint64_t height = 0;
};

struct NodeContext {
  NodeFormat format = NodeFormat::kZcash;
  std::uint32_t branch_id = 0;
};

// Synthetic shielded-pool metadata, a pure function of the header digest.
AuxFields leaf_aux(const Hash32& digest);
Hash32 aux_digest(const AuxFields& aux);

MmrNode make_leaf(const LeafMeta& meta, const NodeContext& ctx);
MmrNode merge_nodes(const MmrNode& left, const MmrNode& right, const NodeContext& ctx);

Bytes serialize_node(const MmrNode& node, NodeFormat format);
MmrNode deserialize_node(ByteSpan data, NodeFormat format);

inline constexpr std::size_t kDistilledNodeSize = 140;
inline constexpr std::size_t kZcashNodeMinSize = 212;
inline constexpr std::size_t kZcashNodeMaxSize = 244;

// Fixed little-endian storage record holding every field regardless of format.
inline constexpr std::size_t kNodeRecordSize = 276;
void write_node_record(const MmrNode& node, std::uint8_t* out);
MmrNode read_node_record(ByteSpan record);

}  // namespace flyclient
