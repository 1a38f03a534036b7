#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "flyclient/chain/header.hpp"
#include "flyclient/core/work.hpp"
#include "flyclient/mmr/node.hpp"

namespace flyclient {

enum class Representation : std::uint8_t { kJson = 0, kBinary = 1, kZipped = 2 };
enum class Scope : std::uint8_t { kPerItem = 0, kWholeProof = 1 };
enum class ProofFormat : std::uint8_t { kNormal = 0, kDistilled = 1 };

const char* to_string(Representation r);
const char* to_string(ProofFormat f);
Representation representation_from_string(const std::string& name);
ProofFormat proof_format_from_string(const std::string& name);

struct Encoding {
  Representation representation = Representation::kBinary;
  Scope scope = Scope::kPerItem;
  ProofFormat format = ProofFormat::kNormal;
  int gzip_level = 6;
};

// A header as a verifier sees it: full, or distilled on chains that support it.
using HeaderView = std::variant<Header, DistilledHeader>;

std::uint64_t view_height(const HeaderView& h);
std::uint32_t view_time(const HeaderView& h);
std::uint32_t view_bits(const HeaderView& h);
// Header hash: the MMR leaf commitment and the parent link of the next block.
Hash32 view_hash(const HeaderView& h);
Bytes view_bytes(const HeaderView& h);
HeaderView view_from_bytes(ByteSpan data, std::uint64_t height, ProofFormat format);

struct BlockchainInfo {
  std::uint64_t block_count = 0;
  U256 total_work = 0;
  HeaderView tip;
};

// Every kind of value a prover returns.
enum class ItemKind : std::uint8_t {
  kInfo = 0,
  kHeader = 1,
  kNode = 2,
  kAuthRoot = 3,
  kTotalWork = 4,
  kHeight = 5,
};

const char* to_string(ItemKind kind);

nlohmann::json header_to_json(const Header& h);
Header header_from_json(const nlohmann::json& j);
nlohmann::json distilled_to_json(const DistilledHeader& h);
DistilledHeader distilled_from_json(const nlohmann::json& j);
nlohmann::json view_to_json(const HeaderView& h);
HeaderView view_from_json(const nlohmann::json& j, ProofFormat format);

nlohmann::json node_to_json(const MmrNode& node, NodeFormat format);
MmrNode node_from_json(const nlohmann::json& j, NodeFormat format);

nlohmann::json info_to_json(const BlockchainInfo& info);
BlockchainInfo info_from_json(const nlohmann::json& j, ProofFormat format);
Bytes info_to_bytes(const BlockchainInfo& info);
BlockchainInfo info_from_bytes(ByteSpan data, ProofFormat format);

std::string bits_hex(std::uint32_t bits);
std::uint32_t bits_from_hex(const std::string& hex);

// One downloaded item with its size under each representation.
struct TranscriptItem {
  ItemKind kind = ItemKind::kHeader;
  std::string role;
  std::uint32_t branch = 0;
  std::uint64_t key = 0;
  Bytes binary;
  std::uint64_t json_bytes = 0;
  std::uint64_t binary_bytes = 0;
  std::uint64_t zipped_bytes = 0;
};

TranscriptItem make_item(ItemKind kind, std::string role, std::uint32_t branch, std::uint64_t key,
                         Bytes binary, const nlohmann::json& json, int gzip_level = 6);

// Payload bytes only; transport framing is not counted. Whole-proof zipped
// compresses the concatenated binary payloads once.
std::uint64_t measure_transcript(std::span<const TranscriptItem> items, const Encoding& enc);

}  // namespace flyclient
