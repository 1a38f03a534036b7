#include "flyclient/codec/encoding.hpp"

#include <cstdio>

#include "flyclient/codec/gzip.hpp"
#include "flyclient/core/error.hpp"

namespace flyclient {

using nlohmann::json;

const char* to_string(Representation r) {
  switch (r) {
    case Representation::kJson:
      return "json";
    case Representation::kBinary:
      return "binary";
    case Representation::kZipped:
      return "zipped";
  }
  return "unknown";
}

const char* to_string(ProofFormat f) { return f == ProofFormat::kNormal ? "normal" : "distilled"; }

Representation representation_from_string(const std::string& name) {
  if (name == "json") return Representation::kJson;
  if (name == "binary") return Representation::kBinary;
  if (name == "zipped") return Representation::kZipped;
  throw ContractError("unknown representation '" + name + "'");
}

ProofFormat proof_format_from_string(const std::string& name) {
  if (name == "normal") return ProofFormat::kNormal;
  if (name == "distilled") return ProofFormat::kDistilled;
  throw ContractError("unknown proof format '" + name + "'");
}

const char* to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::kInfo:
      return "info";
    case ItemKind::kHeader:
      return "header";
    case ItemKind::kNode:
      return "node";
    case ItemKind::kAuthRoot:
      return "authroot";
    case ItemKind::kTotalWork:
      return "totalwork";
    case ItemKind::kHeight:
      return "height";
  }
  return "unknown";
}

std::uint64_t view_height(const HeaderView& h) {
  return std::visit([](const auto& v) { return v.height; }, h);
}

std::uint32_t view_time(const HeaderView& h) {
  return std::visit([](const auto& v) { return v.time; }, h);
}

std::uint32_t view_bits(const HeaderView& h) {
  return std::visit([](const auto& v) { return v.bits; }, h);
}

Hash32 view_hash(const HeaderView& h) {
  if (const auto* full = std::get_if<Header>(&h)) return header_hash(*full);
  return std::get<DistilledHeader>(h).header_hash;
}

Bytes view_bytes(const HeaderView& h) {
  if (const auto* full = std::get_if<Header>(&h)) return serialize_header(*full);
  return serialize_distilled(std::get<DistilledHeader>(h));
}

HeaderView view_from_bytes(ByteSpan data, std::uint64_t height, ProofFormat format) {
  if (format == ProofFormat::kNormal) return deserialize_header(data, height);
  return deserialize_distilled(data, height);
}

std::string bits_hex(std::uint32_t bits) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", bits);
  return buf;
}

std::uint32_t bits_from_hex(const std::string& hex) {
  if (hex.size() != 8) throw DecodeError("bits must be 8 hex digits");
  const Bytes raw = from_hex(hex);
  return (std::uint32_t{raw[0]} << 24) | (std::uint32_t{raw[1]} << 16) |
         (std::uint32_t{raw[2]} << 8) | raw[3];
}

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DecodeError(std::string(what) + ": " + e.what());
  }
}

Hash32 hash_field(const json& j, const char* key) {
  return Hash32::from_hex(j.at(key).get<std::string>());
}

std::uint32_t u32_field(const json& j, const char* key) {
  const std::uint64_t v = j.at(key).get<std::uint64_t>();
  if (v > 0xffffffffULL) throw DecodeError(std::string(key) + " exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

json header_to_json(const Header& h) {
  return {{"hash", header_hash(h).hex()},
          {"height", h.height},
          {"version", h.version},
          {"previousblockhash", h.prev_hash.hex()},
          {"merkleroot", h.merkle_root.hex()},
          {"blockcommitments", h.block_commitments.hex()},
          {"time", h.time},
          {"bits", bits_hex(h.bits)},
          {"nonce", h.nonce.hex()},
          {"solution", to_hex(h.solution)}};
}

Header header_from_json(const json& j) {
  return guarded("header json", [&] {
    Header h;
    h.height = j.at("height").get<std::uint64_t>();
    h.version = u32_field(j, "version");
    h.prev_hash = hash_field(j, "previousblockhash");
    h.merkle_root = hash_field(j, "merkleroot");
    h.block_commitments = hash_field(j, "blockcommitments");
    h.time = u32_field(j, "time");
    h.bits = bits_from_hex(j.at("bits").get<std::string>());
    h.nonce = hash_field(j, "nonce");
    h.solution = from_hex(j.at("solution").get<std::string>());
    if (j.contains("hash") && hash_field(j, "hash") != header_hash(h)) {
      throw DecodeError("header json hash does not match its fields");
    }
    return h;
  });
}

json distilled_to_json(const DistilledHeader& h) {
  json j = {{"hash", h.header_hash.hex()},
            {"height", h.height},
            {"mixhash", h.mixhash.hex()},
            {"chainhistoryroot", h.chain_history_root.hex()},
            {"bits", bits_hex(h.bits)},
            {"time", h.time}};
  if (h.prev_hash) j["previousblockhash"] = h.prev_hash->hex();
  return j;
}

DistilledHeader distilled_from_json(const json& j) {
  return guarded("distilled header json", [&] {
    DistilledHeader h;
    h.header_hash = hash_field(j, "hash");
    h.height = j.at("height").get<std::uint64_t>();
    h.mixhash = hash_field(j, "mixhash");
    h.chain_history_root = hash_field(j, "chainhistoryroot");
    h.bits = bits_from_hex(j.at("bits").get<std::string>());
    h.time = u32_field(j, "time");
    if (j.contains("previousblockhash")) h.prev_hash = hash_field(j, "previousblockhash");
    return h;
  });
}

json view_to_json(const HeaderView& h) {
  if (const auto* full = std::get_if<Header>(&h)) return header_to_json(*full);
  return distilled_to_json(std::get<DistilledHeader>(h));
}

HeaderView view_from_json(const json& j, ProofFormat format) {
  if (format == ProofFormat::kNormal) return header_from_json(j);
  return distilled_from_json(j);
}

json node_to_json(const MmrNode& node, NodeFormat format) {
  json j = {{"commitment", node.commitment.hex()},
            {"earliest_time", node.earliest_time},
            {"latest_time", node.latest_time},
            {"earliest_bits", bits_hex(node.earliest_bits)},
            {"latest_bits", bits_hex(node.latest_bits)},
            {"earliest_height", node.earliest_height},
            {"latest_height", node.latest_height},
            {"work", u256_hex(node.work)}};
  if (format == NodeFormat::kZcash) {
    j["earliest_sapling_root"] = node.aux.earliest_sapling_root.hex();
    j["latest_sapling_root"] = node.aux.latest_sapling_root.hex();
    j["sapling_tx_count"] = node.aux.sapling_tx_count;
    j["earliest_orchard_root"] = node.aux.earliest_orchard_root.hex();
    j["latest_orchard_root"] = node.aux.latest_orchard_root.hex();
    j["orchard_tx_count"] = node.aux.orchard_tx_count;
  } else {
    j["other_fields_hash"] = node.other_fields_hash.hex();
    j["branch_id"] = node.branch_id;
  }
  return j;
}

MmrNode node_from_json(const json& j, NodeFormat format) {
  return guarded("node json", [&] {
    MmrNode n;
    n.commitment = hash_field(j, "commitment");
    n.earliest_time = u32_field(j, "earliest_time");
    n.latest_time = u32_field(j, "latest_time");
    n.earliest_bits = bits_from_hex(j.at("earliest_bits").get<std::string>());
    n.latest_bits = bits_from_hex(j.at("latest_bits").get<std::string>());
    n.earliest_height = j.at("earliest_height").get<std::uint64_t>();
    n.latest_height = j.at("latest_height").get<std::uint64_t>();
    n.work = u256_from_hex(j.at("work").get<std::string>());
    if (format == NodeFormat::kZcash) {
      n.aux.earliest_sapling_root = hash_field(j, "earliest_sapling_root");
      n.aux.latest_sapling_root = hash_field(j, "latest_sapling_root");
      n.aux.sapling_tx_count = j.at("sapling_tx_count").get<std::uint64_t>();
      n.aux.earliest_orchard_root = hash_field(j, "earliest_orchard_root");
      n.aux.latest_orchard_root = hash_field(j, "latest_orchard_root");
      n.aux.orchard_tx_count = j.at("orchard_tx_count").get<std::uint64_t>();
    } else {
      n.other_fields_hash = hash_field(j, "other_fields_hash");
      n.branch_id = u32_field(j, "branch_id");
    }
    return n;
  });
}

json info_to_json(const BlockchainInfo& info) {
  return {{"blocks", info.block_count},
          {"chainwork", u256_hex(info.total_work)},
          {"tip", view_to_json(info.tip)}};
}

BlockchainInfo info_from_json(const json& j, ProofFormat format) {
  return guarded("blockchain info json", [&] {
    BlockchainInfo info;
    info.block_count = j.at("blocks").get<std::uint64_t>();
    info.total_work = u256_from_hex(j.at("chainwork").get<std::string>());
    info.tip = view_from_json(j.at("tip"), format);
    return info;
  });
}

Bytes info_to_bytes(const BlockchainInfo& info) {
  ByteWriter w;
  w.u64le(info.block_count);
  w.bytes(u256_be_bytes(info.total_work));
  w.bytes(view_bytes(info.tip));
  return w.take();
}

BlockchainInfo info_from_bytes(ByteSpan data, ProofFormat format) {
  ByteReader r(data);
  BlockchainInfo info;
  info.block_count = r.u64le();
  if (info.block_count == 0) throw DecodeError("blockchain info declares no blocks");
  info.total_work = u256_from_be(r.bytes(32));
  info.tip = view_from_bytes(r.bytes(r.remaining()), info.block_count - 1, format);
  return info;
}

TranscriptItem make_item(ItemKind kind, std::string role, std::uint32_t branch, std::uint64_t key,
                         Bytes binary, const json& j, int gzip_level) {
  TranscriptItem item;
  item.kind = kind;
  item.role = std::move(role);
  item.branch = branch;
  item.key = key;
  item.json_bytes = j.dump().size();
  item.binary_bytes = binary.size();
  item.zipped_bytes = gzip_compress(binary, gzip_level).size();
  item.binary = std::move(binary);
  return item;
}

std::uint64_t measure_transcript(std::span<const TranscriptItem> items, const Encoding& enc) {
  std::uint64_t total = 0;
  switch (enc.representation) {
    case Representation::kJson:
      for (const auto& i : items) total += i.json_bytes;
      return total;
    case Representation::kBinary:
      for (const auto& i : items) total += i.binary_bytes;
      return total;
    case Representation::kZipped:
      if (enc.scope == Scope::kPerItem) {
        for (const auto& i : items) {
          total += enc.gzip_level == kDefaultGzipLevel ? i.zipped_bytes
                                                       : gzip_compress(i.binary, enc.gzip_level).size();
        }
        return total;
      } else {
        Bytes all;
        for (const auto& i : items) all.insert(all.end(), i.binary.begin(), i.binary.end());
        return items.empty() ? 0 : gzip_compress(all, enc.gzip_level).size();
      }
  }
  return total;
}

}  // namespace flyclient
