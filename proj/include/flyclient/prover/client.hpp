#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "flyclient/codec/ni_file.hpp"
#include "flyclient/prover/service.hpp"

namespace flyclient {

// What a verifier can ask a prover. A missing item raises NotFoundError, an
// unreachable or unsynced prover raises TransportError or
// ServiceUnavailableError, and a malformed answer raises DecodeError.
class ProverClient {
 public:
  virtual ~ProverClient() = default;

  virtual std::string name() const = 0;
  virtual BlockchainInfo get_blockchain_info(ProofFormat format) = 0;
  virtual HeaderView get_block_header(std::uint64_t height, ProofFormat format) = 0;
  virtual MmrNode get_history_node(std::uint32_t branch_id, std::uint64_t index) = 0;
  virtual Hash32 get_auth_data_root(std::uint64_t height) = 0;
  virtual U256 get_total_work(std::uint64_t height) = 0;
  virtual std::uint64_t get_height_with_total_work(const U256& work) = 0;
};

// In-process calls with no serialization.
class LocalClient : public ProverClient {
 public:
  explicit LocalClient(std::shared_ptr<const ProverService> service, std::string name = "local");

  std::string name() const override { return name_; }
  BlockchainInfo get_blockchain_info(ProofFormat format) override;
  HeaderView get_block_header(std::uint64_t height, ProofFormat format) override;
  MmrNode get_history_node(std::uint32_t branch_id, std::uint64_t index) override;
  Hash32 get_auth_data_root(std::uint64_t height) override;
  U256 get_total_work(std::uint64_t height) override;
  std::uint64_t get_height_with_total_work(const U256& work) override;

 private:
  std::shared_ptr<const ProverService> service_;
  std::string name_;
};

// Request body in, response body out. Throws TransportError on failure.
using RpcTransport = std::function<std::string(const std::string&)>;

RpcTransport loopback_transport(std::shared_ptr<const ProverService> service);

// JSON-RPC client. Headers and nodes are fetched with verbosity 0 so the
// payload is the hex of the binary encoding.
class JsonRpcClient : public ProverClient {
 public:
  JsonRpcClient(RpcTransport transport, NodeFormat node_format, std::string name = "jsonrpc");

  std::string name() const override { return name_; }
  BlockchainInfo get_blockchain_info(ProofFormat format) override;
  HeaderView get_block_header(std::uint64_t height, ProofFormat format) override;
  MmrNode get_history_node(std::uint32_t branch_id, std::uint64_t index) override;
  Hash32 get_auth_data_root(std::uint64_t height) override;
  U256 get_total_work(std::uint64_t height) override;
  std::uint64_t get_height_with_total_work(const U256& work) override;

  nlohmann::json request(const std::string& method, const nlohmann::json& params);

 private:
  RpcTransport transport_;
  NodeFormat node_format_;
  std::string name_;
  std::uint64_t next_id_ = 1;
};

// Serves a non-interactive proof bundle as if it were a prover.
class BundleClient : public ProverClient {
 public:
  explicit BundleClient(const NiProof& proof);

  std::string name() const override { return "bundle"; }
  BlockchainInfo get_blockchain_info(ProofFormat format) override;
  HeaderView get_block_header(std::uint64_t height, ProofFormat format) override;
  MmrNode get_history_node(std::uint32_t branch_id, std::uint64_t index) override;
  Hash32 get_auth_data_root(std::uint64_t height) override;
  U256 get_total_work(std::uint64_t height) override;
  std::uint64_t get_height_with_total_work(const U256& work) override;

  // Entries never requested so far.
  std::size_t unused_entries() const;

 private:
  const Bytes& lookup(ItemKind kind, std::uint32_t branch, const U256& key);

  using Key = std::tuple<std::uint8_t, std::uint32_t, U256>;
  std::map<Key, std::pair<Bytes, bool>> items_;
  ProofFormat format_;
  NodeFormat node_format_;
};

// Forwards to another client and keeps every distinct answer, in first-use order.
class RecordingClient : public ProverClient {
 public:
  explicit RecordingClient(ProverClient& inner, ProofFormat format, NodeFormat node_format);

  std::string name() const override { return inner_.name(); }
  BlockchainInfo get_blockchain_info(ProofFormat format) override;
  HeaderView get_block_header(std::uint64_t height, ProofFormat format) override;
  MmrNode get_history_node(std::uint32_t branch_id, std::uint64_t index) override;
  Hash32 get_auth_data_root(std::uint64_t height) override;
  U256 get_total_work(std::uint64_t height) override;
  std::uint64_t get_height_with_total_work(const U256& work) override;

  const std::vector<BundleEntry>& entries() const { return entries_; }

 private:
  void record(ItemKind kind, std::uint32_t branch, const U256& key, Bytes payload);

  ProverClient& inner_;
  ProofFormat format_;
  NodeFormat node_format_;
  std::vector<BundleEntry> entries_;
  std::map<std::tuple<std::uint8_t, std::uint32_t, U256>, std::size_t> seen_;
};

}  // namespace flyclient
