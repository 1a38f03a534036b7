#include "common.hpp"

#include <iostream>
#include <random>

#include "flyclient/core/error.hpp"
#include "flyclient/prover/http.hpp"

namespace flyclient::cli {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, const char* what) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cerr << "using " << what << " seed " << drawn << "\n";
  return drawn;
}

std::filesystem::path chain_dir_of(const std::filesystem::path& path) {
  if (path.filename() == "manifest.json") return path.parent_path().empty() ? "." : path.parent_path();
  return path;
}

U256 parse_u256(const std::string& text) {
  if (text.empty()) throw ContractError("empty number");
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) return u256_from_hex(text.substr(2));
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw ContractError("not a number: '" + text + "'");
  }
  return U256(text);
}

std::uint64_t parse_byte_count(const std::string& text) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ContractError("not a byte count: '" + text + "'");
  }
  const std::string unit = text.substr(used);
  double scale = 1;
  if (unit.empty() || unit == "B") scale = 1;
  else if (unit == "KiB") scale = 1024;
  else if (unit == "MiB") scale = 1024.0 * 1024;
  else if (unit == "GiB") scale = 1024.0 * 1024 * 1024;
  else if (unit == "kB" || unit == "KB") scale = 1e3;
  else if (unit == "MB") scale = 1e6;
  else if (unit == "GB") scale = 1e9;
  else throw ContractError("unknown size unit '" + unit + "'");
  if (!(value >= 0)) throw ContractError("byte count must be non-negative");
  return static_cast<std::uint64_t>(value * scale + 0.5);
}

std::vector<ProverClient*> ProverSet::pointers() const {
  std::vector<ProverClient*> out;
  for (const auto& c : clients) out.push_back(c.get());
  return out;
}

ProverSet open_provers(const std::vector<std::string>& chain_dirs, const std::vector<std::string>& endpoints,
                       NodeFormat node_format, int timeout_seconds) {
  ProverSet set;
  for (const std::string& dir : chain_dirs) {
    LoadOptions load;
    load.check_pow = false;
    auto chain = std::make_shared<const Chain>(load_chain(chain_dir_of(dir), load));
    set.clients.push_back(std::make_unique<LocalClient>(make_local_prover(chain), dir));
  }
  for (const std::string& ep : endpoints) {
    set.clients.push_back(
        std::make_unique<JsonRpcClient>(http_transport(ep, timeout_seconds), node_format, ep));
  }
  return set;
}

}  // namespace flyclient::cli
