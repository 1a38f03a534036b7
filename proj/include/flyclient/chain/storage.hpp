#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "flyclient/chain/chain.hpp"

namespace flyclient {

// On-disk chain directory:
//   manifest.json   parameters, branch table, tip hash, headers digest
//   headers.bin     24-byte file header, then fixed records
//                   (height u64, auth_data_root, header hash, header bytes)
//   branch_<k>.mmr  32-byte file header, then fixed node records
struct Manifest {
  nlohmann::json body;
  Hash32 digest;
  ConsensusParams consensus;
  std::uint64_t seed = 0;
  std::uint64_t length = 0;
  Hash32 tip_hash;
  Hash32 headers_digest;
  bool is_fork = false;
};

nlohmann::json consensus_to_json(const ConsensusParams& consensus);
ConsensusParams consensus_from_json(const nlohmann::json& j);

// Returns the manifest digest.
Hash32 save_chain(const Chain& chain, const std::filesystem::path& dir);

Manifest read_manifest(const std::filesystem::path& dir);

struct LoadOptions {
  bool check_pow = true;
  Kernel kernel = Kernel::kParallel;
};

// Validates every record; failures raise DecodeError naming the height or node.
Chain load_chain(const std::filesystem::path& dir, const LoadOptions& options = {});

Hash32 manifest_digest(const Chain& chain);

// Header records only, validated for framing, hashes and linkage.
struct HeaderRecords {
  std::vector<Header> headers;
  std::vector<Hash32> hashes;
  std::vector<Hash32> auth_roots;
};
HeaderRecords read_header_records(const std::filesystem::path& dir, const Manifest& manifest);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteSpan data);

}  // namespace flyclient
