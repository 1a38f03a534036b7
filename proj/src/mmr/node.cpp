#include "flyclient/mmr/node.hpp"

#include <cstring>

#include "flyclient/core/error.hpp"
#include "flyclient/core/hash.hpp"

namespace flyclient {

const char* to_string(NodeFormat format) {
  return format == NodeFormat::kZcash ? "zcash" : "distilled";
}

AuxFields leaf_aux(const Hash32& digest) {
  AuxFields aux;
  aux.earliest_sapling_root = tagged_hash("sapling-root", digest.span());
  aux.latest_sapling_root = aux.earliest_sapling_root;
  aux.sapling_tx_count = digest.bytes[0] % 4;
  aux.earliest_orchard_root = tagged_hash("orchard-root", digest.span());
  aux.latest_orchard_root = aux.earliest_orchard_root;
  aux.orchard_tx_count = digest.bytes[1] % 4;
  return aux;
}

namespace {

void write_aux(ByteWriter& w, const AuxFields& aux) {
  w.hash(aux.earliest_sapling_root);
  w.hash(aux.latest_sapling_root);
  w.compact_size(aux.sapling_tx_count);
  w.hash(aux.earliest_orchard_root);
  w.hash(aux.latest_orchard_root);
  w.compact_size(aux.orchard_tx_count);
}

void write_work_be(ByteWriter& w, const U256& work) {
  std::uint8_t raw[32];
  u256_to_be(work, raw);
  w.bytes(ByteSpan(raw, 32));
}

}  // namespace

Hash32 aux_digest(const AuxFields& aux) {
  ByteWriter w(150);
  write_aux(w, aux);
  return sha256(w.view());
}

MmrNode make_leaf(const LeafMeta& meta, const NodeContext& ctx) {
  MmrNode node;
  node.commitment = meta.digest;
  node.earliest_time = node.latest_time = meta.time;
  node.earliest_bits = node.latest_bits = meta.bits;
  node.earliest_height = node.latest_height = meta.height;
  node.work = work_from_bits(meta.bits);
  if (ctx.format == NodeFormat::kZcash) {
    node.aux = leaf_aux(meta.digest);
  } else {
    node.other_fields_hash = aux_digest(leaf_aux(meta.digest));
    node.branch_id = ctx.branch_id;
  }
  return node;
}

MmrNode merge_nodes(const MmrNode& left, const MmrNode& right, const NodeContext& ctx) {
  MmrNode node;
  const Bytes l = serialize_node(left, ctx.format);
  const Bytes r = serialize_node(right, ctx.format);
  node.commitment = sha256_concat({l, r});
  node.earliest_time = left.earliest_time;
  node.latest_time = right.latest_time;
  node.earliest_bits = left.earliest_bits;
  node.latest_bits = right.latest_bits;
  node.earliest_height = left.earliest_height;
  node.latest_height = right.latest_height;
  node.work = left.work + right.work;
  if (ctx.format == NodeFormat::kZcash) {
    node.aux.earliest_sapling_root = left.aux.earliest_sapling_root;
    node.aux.latest_sapling_root = right.aux.latest_sapling_root;
    node.aux.sapling_tx_count = left.aux.sapling_tx_count + right.aux.sapling_tx_count;
    node.aux.earliest_orchard_root = left.aux.earliest_orchard_root;
    node.aux.latest_orchard_root = right.aux.latest_orchard_root;
    node.aux.orchard_tx_count = left.aux.orchard_tx_count + right.aux.orchard_tx_count;
  } else {
    node.other_fields_hash =
        sha256_concat({left.other_fields_hash.span(), right.other_fields_hash.span()});
    node.branch_id = ctx.branch_id;
  }
  return node;
}

Bytes serialize_node(const MmrNode& node, NodeFormat format) {
  ByteWriter w(format == NodeFormat::kZcash ? kZcashNodeMaxSize : kDistilledNodeSize);
  w.hash(node.commitment);
  if (format == NodeFormat::kZcash) {
    w.u32le(node.earliest_time);
    w.u32le(node.latest_time);
    w.u32le(node.earliest_bits);
    w.u32le(node.latest_bits);
    w.compact_size(node.earliest_height);
    w.compact_size(node.latest_height);
    write_work_be(w, node.work);
    write_aux(w, node.aux);
  } else {
    w.u64le(node.earliest_time);
    w.u64le(node.latest_time);
    w.u32le(node.earliest_bits);
    w.u32le(node.latest_bits);
    w.u64le(node.earliest_height);
    w.u64le(node.latest_height);
    write_work_be(w, node.work);
    w.hash(node.other_fields_hash);
    w.u32le(node.branch_id);
  }
  return w.take();
}

namespace {

std::uint32_t narrow_time(std::uint64_t t) {
  if (t > 0xffffffffULL) throw DecodeError("node timestamp exceeds 32 bits");
  return static_cast<std::uint32_t>(t);
}

}  // namespace

MmrNode deserialize_node(ByteSpan data, NodeFormat format) {
  ByteReader r(data);
  MmrNode node;
  node.commitment = r.hash();
  if (format == NodeFormat::kZcash) {
    node.earliest_time = r.u32le();
    node.latest_time = r.u32le();
    node.earliest_bits = r.u32le();
    node.latest_bits = r.u32le();
    node.earliest_height = r.compact_size();
    node.latest_height = r.compact_size();
    node.work = u256_from_be(r.bytes(32));
    node.aux.earliest_sapling_root = r.hash();
    node.aux.latest_sapling_root = r.hash();
    node.aux.sapling_tx_count = r.compact_size();
    node.aux.earliest_orchard_root = r.hash();
    node.aux.latest_orchard_root = r.hash();
    node.aux.orchard_tx_count = r.compact_size();
  } else {
    node.earliest_time = narrow_time(r.u64le());
    node.latest_time = narrow_time(r.u64le());
    node.earliest_bits = r.u32le();
    node.latest_bits = r.u32le();
    node.earliest_height = r.u64le();
    node.latest_height = r.u64le();
    node.work = u256_from_be(r.bytes(32));
    node.other_fields_hash = r.hash();
    node.branch_id = r.u32le();
  }
  r.expect_done("mmr node");
  if (node.earliest_height > node.latest_height) throw DecodeError("node height range inverted");
  return node;
}

void write_node_record(const MmrNode& node, std::uint8_t* out) {
  ByteWriter w(kNodeRecordSize);
  w.hash(node.commitment);
  w.u32le(node.earliest_time);
  w.u32le(node.latest_time);
  w.u32le(node.earliest_bits);
  w.u32le(node.latest_bits);
  w.u64le(node.earliest_height);
  w.u64le(node.latest_height);
  std::uint8_t work[32];
  u256_to_le(node.work, work);
  w.bytes(ByteSpan(work, 32));
  w.hash(node.aux.earliest_sapling_root);
  w.hash(node.aux.latest_sapling_root);
  w.u64le(node.aux.sapling_tx_count);
  w.hash(node.aux.earliest_orchard_root);
  w.hash(node.aux.latest_orchard_root);
  w.u64le(node.aux.orchard_tx_count);
  w.hash(node.other_fields_hash);
  w.u32le(node.branch_id);
  std::memcpy(out, w.view().data(), kNodeRecordSize);
}

MmrNode read_node_record(ByteSpan record) {
  if (record.size() != kNodeRecordSize) throw DecodeError("node record has wrong size");
  ByteReader r(record);
  MmrNode node;
  node.commitment = r.hash();
  node.earliest_time = r.u32le();
  node.latest_time = r.u32le();
  node.earliest_bits = r.u32le();
  node.latest_bits = r.u32le();
  node.earliest_height = r.u64le();
  node.latest_height = r.u64le();
  node.work = u256_from_le(r.bytes(32));
  node.aux.earliest_sapling_root = r.hash();
  node.aux.latest_sapling_root = r.hash();
  node.aux.sapling_tx_count = r.u64le();
  node.aux.earliest_orchard_root = r.hash();
  node.aux.latest_orchard_root = r.hash();
  node.aux.orchard_tx_count = r.u64le();
  node.other_fields_hash = r.hash();
  node.branch_id = r.u32le();
  r.expect_done("node record");
  return node;
}

}  // namespace flyclient
