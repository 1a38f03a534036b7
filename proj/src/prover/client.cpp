#include "flyclient/prover/client.hpp"

#include "flyclient/core/error.hpp"

namespace flyclient {

using nlohmann::json;

LocalClient::LocalClient(std::shared_ptr<const ProverService> service, std::string name)
    : service_(std::move(service)), name_(std::move(name)) {}

BlockchainInfo LocalClient::get_blockchain_info(ProofFormat format) {
  return service_->get_blockchain_info(format);
}
HeaderView LocalClient::get_block_header(std::uint64_t height, ProofFormat format) {
  return service_->get_block_header(height, format);
}
MmrNode LocalClient::get_history_node(std::uint32_t branch_id, std::uint64_t index) {
  return service_->get_history_node(branch_id, index);
}
Hash32 LocalClient::get_auth_data_root(std::uint64_t height) {
  return service_->get_auth_data_root(height);
}
U256 LocalClient::get_total_work(std::uint64_t height) { return service_->get_total_work(height); }
std::uint64_t LocalClient::get_height_with_total_work(const U256& work) {
  return service_->get_height_with_total_work(work);
}

RpcTransport loopback_transport(std::shared_ptr<const ProverService> service) {
  return [service](const std::string& body) { return service->handle_jsonrpc(body); };
}

JsonRpcClient::JsonRpcClient(RpcTransport transport, NodeFormat node_format, std::string name)
    : transport_(std::move(transport)), node_format_(node_format), name_(std::move(name)) {}

json JsonRpcClient::request(const std::string& method, const json& params) {
  const std::uint64_t id = next_id_++;
  const json req = {{"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", params}};
  const std::string body = transport_(req.dump());
  json resp;
  try {
    resp = json::parse(body);
  } catch (const json::exception& e) {
    throw DecodeError(name_ + ": unparseable response: " + e.what());
  }
  if (!resp.is_object()) throw DecodeError(name_ + ": response is not an object");
  if (resp.contains("error") && !resp["error"].is_null()) {
    const json& err = resp["error"];
    const int code = err.value("code", 0);
    const std::string message = name_ + ": " + method + ": " + err.value("message", std::string("error"));
    if (code == kRpcInWarmup) throw ServiceUnavailableError(message);
    if (code == kRpcNotFound || code == kRpcInvalidParameter) throw NotFoundError(message);
    throw Error(message);
  }
  if (!resp.contains("result")) throw DecodeError(name_ + ": response without result");
  if (resp.value("id", json()) != json(id)) throw DecodeError(name_ + ": response id mismatch");
  return resp["result"];
}

namespace {

Bytes hex_result(const json& v, const char* what) {
  if (!v.is_string()) throw DecodeError(std::string(what) + " result must be a hex string");
  return from_hex(v.get<std::string>());
}

}  // namespace

BlockchainInfo JsonRpcClient::get_blockchain_info(ProofFormat format) {
  return info_from_json(request("getblockchaininfo", json::array({format == ProofFormat::kDistilled})),
                        format);
}

HeaderView JsonRpcClient::get_block_header(std::uint64_t height, ProofFormat format) {
  const json r = request("getblockheader", json::array({height, 0, format == ProofFormat::kDistilled}));
  return view_from_bytes(hex_result(r, "getblockheader"), height, format);
}

MmrNode JsonRpcClient::get_history_node(std::uint32_t branch_id, std::uint64_t index) {
  const json r = request("gethistorynode", json::array({branch_id, index, 0}));
  return deserialize_node(hex_result(r, "gethistorynode"), node_format_);
}

Hash32 JsonRpcClient::get_auth_data_root(std::uint64_t height) {
  const json r = request("getauthdataroot", json::array({height}));
  return Hash32::from_span(hex_result(r, "getauthdataroot"));
}

U256 JsonRpcClient::get_total_work(std::uint64_t height) {
  const json r = request("gettotalwork", json::array({height}));
  if (!r.is_string()) throw DecodeError("gettotalwork result must be a hex string");
  return u256_from_hex(r.get<std::string>());
}

std::uint64_t JsonRpcClient::get_height_with_total_work(const U256& work) {
  const json r = request("getheightwithtotalwork", json::array({u256_hex(work)}));
  if (!r.is_number_unsigned()) throw DecodeError("getheightwithtotalwork result must be a height");
  return r.get<std::uint64_t>();
}

BundleClient::BundleClient(const NiProof& proof) : format_(proof.format), node_format_(proof.node_format) {
  for (const BundleEntry& e : proof.entries) {
    const Key key{static_cast<std::uint8_t>(e.kind), e.branch, e.key};
    if (!items_.emplace(key, std::make_pair(e.payload, false)).second) {
      throw DecodeError("duplicate bundle entry");
    }
  }
}

const Bytes& BundleClient::lookup(ItemKind kind, std::uint32_t branch, const U256& key) {
  auto it = items_.find(Key{static_cast<std::uint8_t>(kind), branch, key});
  if (it == items_.end()) {
    throw NotFoundError(std::string("proof lacks ") + to_string(kind) + " item (branch " +
                        std::to_string(branch) + ", key " + key.str() + ")");
  }
  it->second.second = true;
  return it->second.first;
}

std::size_t BundleClient::unused_entries() const {
  std::size_t n = 0;
  for (const auto& [key, item] : items_) n += item.second ? 0 : 1;
  return n;
}

BlockchainInfo BundleClient::get_blockchain_info(ProofFormat format) {
  if (format != format_) throw FormatError("proof bundle was recorded in another format");
  return info_from_bytes(lookup(ItemKind::kInfo, 0, 0), format_);
}

HeaderView BundleClient::get_block_header(std::uint64_t height, ProofFormat format) {
  if (format != format_) throw FormatError("proof bundle was recorded in another format");
  return view_from_bytes(lookup(ItemKind::kHeader, 0, height), height, format_);
}

MmrNode BundleClient::get_history_node(std::uint32_t branch_id, std::uint64_t index) {
  return deserialize_node(lookup(ItemKind::kNode, branch_id, index), node_format_);
}

Hash32 BundleClient::get_auth_data_root(std::uint64_t height) {
  const Bytes& b = lookup(ItemKind::kAuthRoot, 0, height);
  if (b.size() != 32) throw DecodeError("auth data root must be 32 bytes");
  return Hash32::from_span(b);
}

U256 BundleClient::get_total_work(std::uint64_t height) {
  const Bytes& b = lookup(ItemKind::kTotalWork, 0, height);
  if (b.size() != 32) throw DecodeError("total work must be 32 bytes");
  return u256_from_be(b);
}

std::uint64_t BundleClient::get_height_with_total_work(const U256& work) {
  ByteReader r(lookup(ItemKind::kHeight, 0, work));
  const std::uint64_t h = r.u64le();
  r.expect_done("height item");
  return h;
}

RecordingClient::RecordingClient(ProverClient& inner, ProofFormat format, NodeFormat node_format)
    : inner_(inner), format_(format), node_format_(node_format) {}

void RecordingClient::record(ItemKind kind, std::uint32_t branch, const U256& key, Bytes payload) {
  const auto k = std::make_tuple(static_cast<std::uint8_t>(kind), branch, key);
  if (seen_.count(k)) return;
  seen_.emplace(k, entries_.size());
  entries_.push_back({kind, branch, key, std::move(payload)});
}

BlockchainInfo RecordingClient::get_blockchain_info(ProofFormat format) {
  BlockchainInfo info = inner_.get_blockchain_info(format);
  record(ItemKind::kInfo, 0, 0, info_to_bytes(info));
  return info;
}

HeaderView RecordingClient::get_block_header(std::uint64_t height, ProofFormat format) {
  HeaderView h = inner_.get_block_header(height, format);
  record(ItemKind::kHeader, 0, height, view_bytes(h));
  return h;
}

MmrNode RecordingClient::get_history_node(std::uint32_t branch_id, std::uint64_t index) {
  MmrNode node = inner_.get_history_node(branch_id, index);
  record(ItemKind::kNode, branch_id, index, serialize_node(node, node_format_));
  return node;
}

Hash32 RecordingClient::get_auth_data_root(std::uint64_t height) {
  const Hash32 root = inner_.get_auth_data_root(height);
  record(ItemKind::kAuthRoot, 0, height, Bytes(root.bytes.begin(), root.bytes.end()));
  return root;
}

U256 RecordingClient::get_total_work(std::uint64_t height) {
  const U256 w = inner_.get_total_work(height);
  record(ItemKind::kTotalWork, 0, height, u256_be_bytes(w));
  return w;
}

std::uint64_t RecordingClient::get_height_with_total_work(const U256& work) {
  const std::uint64_t h = inner_.get_height_with_total_work(work);
  ByteWriter w(8);
  w.u64le(h);
  record(ItemKind::kHeight, 0, work, w.take());
  return h;
}

}  // namespace flyclient
