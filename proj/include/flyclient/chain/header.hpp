#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flyclient/core/bytes.hpp"

namespace flyclient {

enum class PowKind : std::uint8_t { kMockSha = 0, kEquihashStub = 1, kEthashStub = 2 };

const char* to_string(PowKind kind);
PowKind pow_kind_from_string(const std::string& name);
std::size_t solution_size(PowKind kind);

struct Header {
  std::uint32_t version = 4;
  Hash32 prev_hash;
  Hash32 merkle_root;
  Hash32 block_commitments;
  std::uint32_t time = 0;
  std::uint32_t bits = 0;
  Hash32 nonce;
  Bytes solution;
  // Position in the chain; implied by context, never serialized.
  std::uint64_t height = 0;

  bool operator==(const Header&) const = default;
};

inline constexpr std::size_t kHeaderFixedSize = 143;
inline constexpr std::size_t kDistilledHeaderSize = 104;
inline constexpr std::size_t kSpvDistilledHeaderSize = 136;

std::size_t serialized_size(const Header& header);
Bytes serialize_header(const Header& header);
Header deserialize_header(ByteSpan data, std::uint64_t height);
Hash32 header_hash(const Header& header);

// Binds the auth-data digest and the chain history root into one field.
Hash32 commit_block(const Hash32& auth_data_root, const Hash32& chain_history_root);

struct DistilledHeader {
  Hash32 header_hash;
  Hash32 mixhash;
  Hash32 chain_history_root;
  std::uint32_t bits = 0;
  std::uint32_t time = 0;
  std::optional<Hash32> prev_hash;
  std::uint64_t height = 0;

  bool operator==(const DistilledHeader&) const = default;
};

// Only headers carrying a 32-byte mixhash can be distilled. The header's
// block_commitments field is the chain history root for such chains.
DistilledHeader distill(const Header& header, bool with_prev_hash = false);
Bytes serialize_distilled(const DistilledHeader& header);
DistilledHeader deserialize_distilled(ByteSpan data, std::uint64_t height);

}  // namespace flyclient
