#include "flyclient/chain/header.hpp"

#include "flyclient/core/error.hpp"
#include "flyclient/core/hash.hpp"

namespace flyclient {

const char* to_string(PowKind kind) {
  switch (kind) {
    case PowKind::kMockSha:
      return "mock-sha";
    case PowKind::kEquihashStub:
      return "equihash-stub";
    case PowKind::kEthashStub:
      return "ethash-stub";
  }
  return "unknown";
}

PowKind pow_kind_from_string(const std::string& name) {
  if (name == "mock-sha") return PowKind::kMockSha;
  if (name == "equihash-stub") return PowKind::kEquihashStub;
  if (name == "ethash-stub") return PowKind::kEthashStub;
  throw ContractError("unknown PoW engine '" + name + "'");
}

std::size_t solution_size(PowKind kind) {
  switch (kind) {
    case PowKind::kMockSha:
      return 0;
    case PowKind::kEquihashStub:
      return 1344;
    case PowKind::kEthashStub:
      return 32;
  }
  return 0;
}

std::size_t serialized_size(const Header& header) {
  return kHeaderFixedSize + header.solution.size();
}

Bytes serialize_header(const Header& header) {
  if (header.solution.size() > 0xffffff) throw FormatError("solution too large");
  ByteWriter w(serialized_size(header));
  w.u32le(header.version);
  w.hash(header.prev_hash);
  w.hash(header.merkle_root);
  w.hash(header.block_commitments);
  w.u32le(header.time);
  w.u32le(header.bits);
  w.hash(header.nonce);
  w.u24le(static_cast<std::uint32_t>(header.solution.size()));
  w.bytes(header.solution);
  return w.take();
}

Header deserialize_header(ByteSpan data, std::uint64_t height) {
  ByteReader r(data);
  Header h;
  h.version = r.u32le();
  h.prev_hash = r.hash();
  h.merkle_root = r.hash();
  h.block_commitments = r.hash();
  h.time = r.u32le();
  h.bits = r.u32le();
  h.nonce = r.hash();
  const std::uint32_t size = r.u24le();
  const ByteSpan sol = r.bytes(size);
  h.solution.assign(sol.begin(), sol.end());
  r.expect_done("header");
  h.height = height;
  return h;
}

Hash32 header_hash(const Header& header) { return sha256(serialize_header(header)); }

Hash32 commit_block(const Hash32& auth_data_root, const Hash32& chain_history_root) {
  static const Hash32 kTerminator{};
  return sha256_concat({chain_history_root.span(), auth_data_root.span(), kTerminator.span()});
}

DistilledHeader distill(const Header& header, bool with_prev_hash) {
  if (header.solution.size() != 32) {
    throw FormatError("distilled encoding needs a 32-byte mixhash, header has a " +
                      std::to_string(header.solution.size()) + "-byte solution");
  }
  DistilledHeader d;
  d.header_hash = header_hash(header);
  d.mixhash = Hash32::from_span(header.solution);
  d.chain_history_root = header.block_commitments;
  d.bits = header.bits;
  d.time = header.time;
  if (with_prev_hash) d.prev_hash = header.prev_hash;
  d.height = header.height;
  return d;
}

Bytes serialize_distilled(const DistilledHeader& header) {
  ByteWriter w(header.prev_hash ? kSpvDistilledHeaderSize : kDistilledHeaderSize);
  w.hash(header.header_hash);
  w.hash(header.mixhash);
  w.hash(header.chain_history_root);
  w.u32le(header.bits);
  w.u32le(header.time);
  if (header.prev_hash) w.hash(*header.prev_hash);
  return w.take();
}

DistilledHeader deserialize_distilled(ByteSpan data, std::uint64_t height) {
  if (data.size() != kDistilledHeaderSize && data.size() != kSpvDistilledHeaderSize) {
    throw DecodeError("distilled header must be 104 or 136 bytes, got " +
                      std::to_string(data.size()));
  }
  ByteReader r(data);
  DistilledHeader d;
  d.header_hash = r.hash();
  d.mixhash = r.hash();
  d.chain_history_root = r.hash();
  d.bits = r.u32le();
  d.time = r.u32le();
  if (!r.done()) d.prev_hash = r.hash();
  d.height = height;
  return d;
}

}  // namespace flyclient
