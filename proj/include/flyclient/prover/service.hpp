#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "flyclient/codec/encoding.hpp"
#include "flyclient/prover/store.hpp"

namespace flyclient {

// JSON-RPC error codes, following bitcoind where one exists.
inline constexpr int kRpcInWarmup = -28;
inline constexpr int kRpcNotFound = -5;
inline constexpr int kRpcInvalidParameter = -8;
inline constexpr int kRpcParseError = -32700;
inline constexpr int kRpcInvalidRequest = -32600;
inline constexpr int kRpcMethodNotFound = -32601;
inline constexpr int kRpcInvalidParams = -32602;
inline constexpr int kRpcInternalError = -32603;

// Read-only prover over one chain. Until a node store is attached every
// request fails with ServiceUnavailableError.
class ProverService {
 public:
  explicit ProverService(std::shared_ptr<const Chain> chain,
                         std::shared_ptr<const NodeStore> store = nullptr);

  // Store and chain must come from the same manifest. Blocks until
  // in-flight requests finish.
  void attach_store(std::shared_ptr<const NodeStore> store);
  bool synced() const;
  // Header format for JSON-RPC calls that omit "distilled". Set before serving.
  void set_default_format(ProofFormat format) { distilled_default_ = format == ProofFormat::kDistilled; }

  const Chain& chain() const { return *chain_; }
  const ConsensusParams& consensus() const { return chain_->consensus; }

  BlockchainInfo get_blockchain_info(ProofFormat format = ProofFormat::kNormal) const;
  HeaderView get_block_header(std::uint64_t height, ProofFormat format = ProofFormat::kNormal) const;
  MmrNode get_history_node(std::uint32_t branch_id, std::uint64_t index) const;
  Hash32 get_auth_data_root(std::uint64_t height) const;
  U256 get_total_work(std::uint64_t height) const;
  std::uint64_t get_height_with_total_work(const U256& work) const;

  // Result of one method call; throws the typed errors above.
  nlohmann::json call(const std::string& method, const nlohmann::json& params) const;
  // Full JSON-RPC 2.0 request/response handling, never throws.
  std::string handle_jsonrpc(const std::string& request) const;

 private:
  std::shared_ptr<const NodeStore> snapshot() const;

  std::shared_ptr<const Chain> chain_;
  std::shared_ptr<const NodeStore> store_;
  mutable std::shared_mutex mutex_;
  std::optional<Hash32> chain_digest_;
  bool distilled_default_ = false;
};

// Prover over an in-memory chain with the chain's own MMRs as its store.
std::shared_ptr<ProverService> make_local_prover(std::shared_ptr<const Chain> chain);

}  // namespace flyclient
