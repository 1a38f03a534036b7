#include "flyclient/codec/ni_file.hpp"

#include <algorithm>

#include "flyclient/codec/gzip.hpp"
#include "flyclient/core/error.hpp"

namespace flyclient {

using nlohmann::json;

namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'L', 'N', 'I'};
constexpr std::uint16_t kVersion = 1;

Bytes key_bytes(const U256& key) {
  Bytes be = u256_be_bytes(key);
  auto first = std::find_if(be.begin(), be.end(), [](std::uint8_t b) { return b != 0; });
  return Bytes(first, be.end());
}

template <typename E>
E checked_enum(std::uint8_t raw, std::uint8_t max, const char* what) {
  if (raw > max) throw DecodeError(std::string("unknown ") + what + " tag " + std::to_string(raw));
  return static_cast<E>(raw);
}

}  // namespace

const char* to_string(ProofStyle s) { return s == ProofStyle::kPerSample ? "per-sample" : "cumulative"; }

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kReference:
      return "reference";
    case Variant::kFixedDifficulty:
      return "fixed-difficulty";
    case Variant::kCacheLess:
      return "cache-less";
  }
  return "unknown";
}

ProofStyle proof_style_from_string(const std::string& name) {
  if (name == "per-sample") return ProofStyle::kPerSample;
  if (name == "cumulative") return ProofStyle::kCumulative;
  throw ContractError("unknown proof style '" + name + "'");
}

Variant variant_from_string(const std::string& name) {
  if (name == "reference") return Variant::kReference;
  if (name == "fixed-difficulty") return Variant::kFixedDifficulty;
  if (name == "cache-less") return Variant::kCacheLess;
  throw ContractError("unknown verifier variant '" + name + "'");
}

Bytes encode_bundle(const std::vector<BundleEntry>& entries) {
  ByteWriter w;
  w.compact_size(entries.size());
  for (const BundleEntry& e : entries) {
    w.u8(static_cast<std::uint8_t>(e.kind));
    w.u32le(e.branch);
    const Bytes key = key_bytes(e.key);
    w.u8(static_cast<std::uint8_t>(key.size()));
    w.bytes(key);
    w.compact_size(e.payload.size());
    w.bytes(e.payload);
  }
  return w.take();
}

std::vector<BundleEntry> decode_bundle(ByteSpan data) {
  ByteReader r(data);
  const std::uint64_t count = r.compact_size();
  if (count > data.size()) throw DecodeError("bundle entry count exceeds its size");
  std::vector<BundleEntry> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    BundleEntry e;
    e.kind = checked_enum<ItemKind>(r.u8(), 5, "item kind");
    e.branch = r.u32le();
    const std::uint8_t key_len = r.u8();
    if (key_len > 32) throw DecodeError("bundle key longer than 32 bytes");
    const ByteSpan key = r.bytes(key_len);
    if (key_len > 0 && key[0] == 0) throw DecodeError("non-minimal bundle key");
    std::uint8_t padded[32] = {};
    std::copy(key.begin(), key.end(), padded + (32 - key_len));
    e.key = u256_from_be(ByteSpan(padded, 32));
    const ByteSpan payload = r.bytes(r.compact_size());
    e.payload.assign(payload.begin(), payload.end());
    out.push_back(std::move(e));
  }
  r.expect_done("bundle");
  return out;
}

json entry_to_json(const BundleEntry& e, ProofFormat format, NodeFormat node_format) {
  json value;
  switch (e.kind) {
    case ItemKind::kInfo:
      value = info_to_json(info_from_bytes(e.payload, format));
      break;
    case ItemKind::kHeader:
      value = view_to_json(view_from_bytes(e.payload, static_cast<std::uint64_t>(e.key), format));
      break;
    case ItemKind::kNode:
      value = node_to_json(deserialize_node(e.payload, node_format), node_format);
      break;
    case ItemKind::kAuthRoot:
      value = Hash32::from_span(e.payload).hex();
      break;
    case ItemKind::kTotalWork:
      value = u256_hex(u256_from_be(e.payload));
      break;
    case ItemKind::kHeight: {
      ByteReader r(e.payload);
      value = r.u64le();
      r.expect_done("height item");
      break;
    }
  }
  return {{"kind", to_string(e.kind)}, {"branch", e.branch}, {"key", u256_hex(e.key)}, {"value", value}};
}

BundleEntry entry_from_json(const json& j, ProofFormat format, NodeFormat node_format) {
  try {
    BundleEntry e;
    const std::string kind = j.at("kind").get<std::string>();
    bool matched = false;
    for (std::uint8_t k = 0; k <= 5; ++k) {
      if (kind == to_string(static_cast<ItemKind>(k))) {
        e.kind = static_cast<ItemKind>(k);
        matched = true;
      }
    }
    if (!matched) throw DecodeError("unknown item kind '" + kind + "'");
    e.branch = j.at("branch").get<std::uint32_t>();
    e.key = u256_from_hex(j.at("key").get<std::string>());
    const json& v = j.at("value");
    switch (e.kind) {
      case ItemKind::kInfo:
        e.payload = info_to_bytes(info_from_json(v, format));
        break;
      case ItemKind::kHeader:
        e.payload = view_bytes(view_from_json(v, format));
        break;
      case ItemKind::kNode:
        e.payload = serialize_node(node_from_json(v, node_format), node_format);
        break;
      case ItemKind::kAuthRoot: {
        const Hash32 h = Hash32::from_hex(v.get<std::string>());
        e.payload.assign(h.bytes.begin(), h.bytes.end());
        break;
      }
      case ItemKind::kTotalWork:
        e.payload = u256_be_bytes(u256_from_hex(v.get<std::string>()));
        break;
      case ItemKind::kHeight: {
        ByteWriter w(8);
        w.u64le(v.get<std::uint64_t>());
        e.payload = w.take();
        break;
      }
    }
    return e;
  } catch (const json::exception& ex) {
    throw DecodeError(std::string("bundle entry json: ") + ex.what());
  }
}

Bytes encode_ni_file(const NiProof& proof, Representation encoding, int gzip_level) {
  ByteWriter w;
  w.bytes(ByteSpan(kMagic, 4));
  w.u16le(kVersion);
  w.u8(static_cast<std::uint8_t>(encoding));
  w.u8(static_cast<std::uint8_t>(proof.format));
  w.u8(static_cast<std::uint8_t>(proof.style));
  w.u8(static_cast<std::uint8_t>(proof.variant));
  w.u8(static_cast<std::uint8_t>(proof.node_format));
  w.u8(0);
  w.hash(proof.manifest_digest);
  if (encoding == Representation::kJson) {
    json arr = json::array();
    for (const BundleEntry& e : proof.entries) arr.push_back(entry_to_json(e, proof.format, proof.node_format));
    const std::string text = arr.dump();
    w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  } else {
    const Bytes bundle = encode_bundle(proof.entries);
    w.bytes(encoding == Representation::kBinary ? bundle : gzip_compress(bundle, gzip_level));
  }
  return w.take();
}

NiProof decode_ni_file(ByteSpan data) {
  ByteReader r(data);
  const ByteSpan magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError("not a proof file");
  if (r.u16le() != kVersion) throw DecodeError("unsupported proof file version");
  const auto encoding = checked_enum<Representation>(r.u8(), 2, "encoding");
  NiProof proof;
  proof.format = checked_enum<ProofFormat>(r.u8(), 1, "format");
  proof.style = checked_enum<ProofStyle>(r.u8(), 1, "style");
  proof.variant = checked_enum<Variant>(r.u8(), 2, "variant");
  proof.node_format = checked_enum<NodeFormat>(r.u8(), 1, "node format");
  r.u8();
  proof.manifest_digest = r.hash();
  const ByteSpan body = r.bytes(r.remaining());
  if (encoding == Representation::kJson) {
    json arr;
    try {
      arr = json::parse(body.begin(), body.end());
    } catch (const json::exception& e) {
      throw DecodeError(std::string("proof json: ") + e.what());
    }
    if (!arr.is_array()) throw DecodeError("proof json must be an array");
    for (const json& j : arr) proof.entries.push_back(entry_from_json(j, proof.format, proof.node_format));
  } else if (encoding == Representation::kBinary) {
    proof.entries = decode_bundle(body);
  } else {
    proof.entries = decode_bundle(gzip_decompress(body));
  }
  return proof;
}

std::uint64_t ni_bundle_size(const NiProof& proof, Representation representation, int gzip_level) {
  return encode_ni_file(proof, representation, gzip_level).size() - kNiFilePrefix;
}

std::uint64_t ni_piecewise_zipped_size(const NiProof& proof, int gzip_level) {
  std::uint64_t total = 0;
  for (const BundleEntry& e : proof.entries) total += gzip_compress(e.payload, gzip_level).size();
  return total;
}

}  // namespace flyclient
