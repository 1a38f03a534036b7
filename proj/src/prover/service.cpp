#include "flyclient/prover/service.hpp"

#include <algorithm>
#include <mutex>

#include "flyclient/core/error.hpp"

namespace flyclient {

using nlohmann::json;

namespace {

HeaderView view_of(const Header& header, ProofFormat format) {
  if (format == ProofFormat::kNormal) return header;
  return distill(header);
}

class ParamsError : public Error {
 public:
  using Error::Error;
};

const json& param(const json& params, std::size_t pos, const char* name) {
  if (params.is_array()) {
    if (pos < params.size()) return params[pos];
  } else if (params.is_object() && params.contains(name)) {
    return params.at(name);
  }
  throw ParamsError(std::string("missing parameter '") + name + "'");
}

const json* optional_param(const json& params, std::size_t pos, const char* name) {
  if (params.is_array()) return pos < params.size() ? &params[pos] : nullptr;
  if (params.is_object() && params.contains(name)) return &params.at(name);
  return nullptr;
}

std::uint64_t as_u64(const json& v, const char* name) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ParamsError(std::string("parameter '") + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool as_bool(const json* v, const char* name, bool fallback) {
  if (!v) return fallback;
  if (!v->is_boolean()) throw ParamsError(std::string("parameter '") + name + "' must be a boolean");
  return v->get<bool>();
}

int verbosity(const json* v) {
  if (!v) return 1;
  if (v->is_boolean()) return v->get<bool>() ? 1 : 0;
  if (!v->is_number_integer() || (v->get<int>() != 0 && v->get<int>() != 1)) {
    throw ParamsError("verbosity must be 0 or 1");
  }
  return v->get<int>();
}

json error_response(const json& id, int code, const std::string& message) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

ProverService::ProverService(std::shared_ptr<const Chain> chain, std::shared_ptr<const NodeStore> store)
    : chain_(std::move(chain)) {
  if (!chain_) throw ContractError("prover needs a chain");
  if (store) attach_store(std::move(store));
}

void ProverService::attach_store(std::shared_ptr<const NodeStore> store) {
  if (!store) throw ContractError("null store");
  std::unique_lock lock(mutex_);
  if (store->borrowed_chain() != chain_.get()) {
    if (!chain_digest_) chain_digest_ = manifest_digest(*chain_);
    if (store->manifest_digest() != *chain_digest_) {
      throw ContractError("store was synced from a different chain");
    }
  }
  store_ = std::move(store);
}

bool ProverService::synced() const {
  std::shared_lock lock(mutex_);
  return store_ != nullptr;
}

std::shared_ptr<const NodeStore> ProverService::snapshot() const {
  std::shared_lock lock(mutex_);
  if (!store_) throw ServiceUnavailableError("prover node store is not synced");
  return store_;
}

BlockchainInfo ProverService::get_blockchain_info(ProofFormat format) const {
  snapshot();
  return {chain_->length(), chain_->total_work(chain_->tip_height()), view_of(chain_->tip(), format)};
}

HeaderView ProverService::get_block_header(std::uint64_t height, ProofFormat format) const {
  snapshot();
  return view_of(chain_->header(height), format);
}

MmrNode ProverService::get_history_node(std::uint32_t branch_id, std::uint64_t index) const {
  return snapshot()->node(branch_id, index);
}

Hash32 ProverService::get_auth_data_root(std::uint64_t height) const {
  snapshot();
  chain_->header(height);
  return chain_->auth_roots[height];
}

U256 ProverService::get_total_work(std::uint64_t height) const {
  snapshot();
  return chain_->total_work(height);
}

std::uint64_t ProverService::get_height_with_total_work(const U256& work) const {
  snapshot();
  return chain_->height_with_total_work(work);
}

json ProverService::call(const std::string& method, const json& params) const {
  if (!params.is_array() && !params.is_object() && !params.is_null()) {
    throw ParamsError("params must be an array or object");
  }
  if (method == "getblockchaininfo") {
    const bool distilled = as_bool(optional_param(params, 0, "distilled"), "distilled", distilled_default_);
    const BlockchainInfo info =
        get_blockchain_info(distilled ? ProofFormat::kDistilled : ProofFormat::kNormal);
    return info_to_json(info);
  }
  if (method == "getblockheader") {
    const std::uint64_t height = as_u64(param(params, 0, "height"), "height");
    const int verbose = verbosity(optional_param(params, 1, "verbosity"));
    const bool distilled = as_bool(optional_param(params, 2, "distilled"), "distilled", distilled_default_);
    const HeaderView view =
        get_block_header(height, distilled ? ProofFormat::kDistilled : ProofFormat::kNormal);
    if (verbose == 0) return to_hex(view_bytes(view));
    return view_to_json(view);
  }
  if (method == "gethistorynode") {
    const json& b = param(params, 0, "branch");
    const std::uint64_t branch = as_u64(b, "branch");
    if (branch > 0xFFFFFFFFull) throw ParamsError("branch id must fit in 32 bits");
    const std::uint64_t index = as_u64(param(params, 1, "index"), "index");
    const int verbose = verbosity(optional_param(params, 2, "verbosity"));
    const MmrNode node = get_history_node(static_cast<std::uint32_t>(branch), index);
    const NodeFormat format = consensus().node_format();
    if (verbose == 0) return to_hex(serialize_node(node, format));
    return node_to_json(node, format);
  }
  if (method == "getauthdataroot") {
    return get_auth_data_root(as_u64(param(params, 0, "height"), "height")).hex();
  }
  if (method == "gettotalwork") {
    return u256_hex(get_total_work(as_u64(param(params, 0, "height"), "height")));
  }
  if (method == "getheightwithtotalwork") {
    const json& w = param(params, 0, "work");
    if (!w.is_string()) throw ParamsError("work must be a hex string");
    U256 work;
    try {
      work = u256_from_hex(w.get<std::string>());
    } catch (const Error& e) {
      throw ParamsError(e.what());
    }
    return get_height_with_total_work(work);
  }
  throw NotFoundError("method not found: " + method);
}

std::string ProverService::handle_jsonrpc(const std::string& request) const {
  json id = nullptr;
  json req;
  try {
    req = json::parse(request);
  } catch (const json::exception& e) {
    return error_response(id, kRpcParseError, std::string("parse error: ") + e.what()).dump();
  }
  if (!req.is_object() || !req.contains("method") || !req["method"].is_string()) {
    if (req.is_object() && req.contains("id")) id = req["id"];
    return error_response(id, kRpcInvalidRequest, "invalid request").dump();
  }
  if (req.contains("id")) id = req["id"];
  const std::string method = req["method"].get<std::string>();
  const json params = req.contains("params") ? req["params"] : json::array();
  static const char* const kMethods[] = {"getblockchaininfo", "getblockheader", "gethistorynode",
                                         "getauthdataroot",   "gettotalwork",   "getheightwithtotalwork"};
  if (std::find(std::begin(kMethods), std::end(kMethods), method) == std::end(kMethods)) {
    return error_response(id, kRpcMethodNotFound, "method not found: " + method).dump();
  }
  try {
    return json{{"jsonrpc", "2.0"}, {"id", id}, {"result", call(method, params)}}.dump();
  } catch (const ServiceUnavailableError& e) {
    return error_response(id, kRpcInWarmup, e.what()).dump();
  } catch (const NotFoundError& e) {
    return error_response(id, kRpcNotFound, e.what()).dump();
  } catch (const ParamsError& e) {
    return error_response(id, kRpcInvalidParams, e.what()).dump();
  } catch (const FormatError& e) {
    return error_response(id, kRpcInvalidParameter, e.what()).dump();
  } catch (const std::exception& e) {
    return error_response(id, kRpcInternalError, e.what()).dump();
  }
}

std::shared_ptr<ProverService> make_local_prover(std::shared_ptr<const Chain> chain) {
  auto store = std::make_shared<const NodeStore>(NodeStore::borrow(chain));
  return std::make_shared<ProverService>(std::move(chain), std::move(store));
}

}  // namespace flyclient
