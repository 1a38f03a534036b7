#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flyclient/chain/storage.hpp"
#include "flyclient/prover/client.hpp"
#include "flyclient/verifier/session.hpp"

namespace flyclient::cli {

// Documented exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitTransport = 2;
inline constexpr int kExitDecode = 3;
inline constexpr int kExitError = 4;

// Uses the given seed, or draws one and reports it on stderr.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, const char* what);

// Accepts a chain directory or a path to its manifest.json.
std::filesystem::path chain_dir_of(const std::filesystem::path& path);

// Decimal, or hex with a 0x prefix.
U256 parse_u256(const std::string& text);

// "1258291", "320KiB", "1.2MiB", "4kB".
std::uint64_t parse_byte_count(const std::string& text);

// Provers named on the command line: in-process over chain directories, or
// JSON-RPC over HTTP endpoints.
struct ProverSet {
  std::vector<std::unique_ptr<ProverClient>> clients;
  std::vector<ProverClient*> pointers() const;
};

ProverSet open_provers(const std::vector<std::string>& chain_dirs, const std::vector<std::string>& endpoints,
                       NodeFormat node_format, int timeout_seconds);

}  // namespace flyclient::cli
