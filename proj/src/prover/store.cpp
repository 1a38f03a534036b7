#include "flyclient/prover/store.hpp"

#include <algorithm>

#include "flyclient/core/error.hpp"

namespace flyclient {

namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'L', 'Y', 'S'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kNodeTag = 0x01;
constexpr std::uint8_t kMetaTag = 0x02;

std::vector<StoreBranch> branch_layout(const ConsensusParams& consensus, std::uint64_t length) {
  std::vector<StoreBranch> out;
  const std::uint64_t tip = length - 1;
  for (std::size_t k = 0; k < consensus.branch_count(); ++k) {
    const std::uint64_t start = consensus.branch_start(k);
    const std::uint64_t end = k + 1 < consensus.branch_count() ? consensus.branch_start(k + 1) : tip;
    out.push_back({consensus.branch_ids[k], start, end - start});
  }
  return out;
}

LeafMeta meta_of(const Header& header, const Hash32& hash) {
  return {hash, header.time, header.bits, header.height};
}

NodeStore sync_headers(const ConsensusParams& consensus, const std::vector<Header>& headers,
                       const std::vector<Hash32>& hashes, SyncMode mode,
                       const std::filesystem::path& path, const Hash32& digest) {
  if (headers.empty()) throw ContractError("cannot sync an empty chain");
  const std::vector<StoreBranch> layout = branch_layout(consensus, headers.size());
  StoreWriter writer(path, layout);
  if (mode == SyncMode::kDuringSync) {
    std::vector<Mmr> mmrs;
    for (std::size_t k = 0; k < layout.size(); ++k) {
      mmrs.emplace_back(consensus.node_context(k), layout[k].start_height);
    }
    for (std::uint64_t h = 0; h + 1 < headers.size(); ++h) {
      const std::size_t k = consensus.branch_index(h);
      Mmr& mmr = mmrs[k];
      for (std::uint64_t index : mmr.append_leaf(meta_of(headers[h], hashes[h]))) {
        writer.append(layout[k].branch_id, index, mmr.node(index));
      }
    }
  } else {
    for (std::size_t k = 0; k < layout.size(); ++k) {
      std::vector<LeafMeta> leaves;
      leaves.reserve(layout[k].leaf_count);
      for (std::uint64_t i = 0; i < layout[k].leaf_count; ++i) {
        const std::uint64_t h = layout[k].start_height + i;
        leaves.push_back(meta_of(headers[h], hashes[h]));
      }
      const std::vector<MmrNode> nodes = build_nodes(leaves, consensus.node_context(k), Kernel::kParallel);
      for (std::uint64_t index = 0; index < nodes.size(); ++index) {
        writer.append(layout[k].branch_id, index, nodes[index]);
      }
    }
  }
  return writer.finalize(digest);
}

}  // namespace

std::size_t NodeStore::branch_slot(std::uint32_t branch_id) const {
  for (std::size_t k = 0; k < branches_.size(); ++k) {
    if (branches_[k].branch_id == branch_id) return k;
  }
  throw NotFoundError("unknown branch id " + std::to_string(branch_id));
}

const std::vector<MmrNode>& NodeStore::nodes_of(std::size_t slot) const {
  return borrowed_ ? borrowed_->branches[slot].mmr.nodes() : owned_[slot];
}

std::uint64_t NodeStore::node_count(std::uint32_t branch_id) const {
  return nodes_of(branch_slot(branch_id)).size();
}

std::uint64_t NodeStore::total_nodes() const {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < branches_.size(); ++k) total += nodes_of(k).size();
  return total;
}

const MmrNode& NodeStore::node(std::uint32_t branch_id, std::uint64_t index) const {
  const std::vector<MmrNode>& nodes = nodes_of(branch_slot(branch_id));
  if (index >= nodes.size()) {
    throw NotFoundError("node " + std::to_string(index) + " not in branch " +
                        std::to_string(branch_id) + " (" + std::to_string(nodes.size()) +
                        " nodes)");
  }
  return nodes[index];
}

NodeStore NodeStore::borrow(std::shared_ptr<const Chain> chain) {
  if (!chain) throw ContractError("no chain to borrow");
  NodeStore store;
  store.digest_ = flyclient::manifest_digest(*chain);
  for (const ChainBranch& b : chain->branches) {
    store.branches_.push_back({b.branch_id, b.start_height, b.mmr.leaf_count()});
  }
  store.borrowed_ = std::move(chain);
  return store;
}

NodeStore NodeStore::open(const std::filesystem::path& path) {
  const Bytes data = read_file(path);
  ByteReader r(data);
  try {
    const ByteSpan magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError("not a node store");
    if (r.u16le() != kVersion) throw DecodeError("unsupported node store version");
    r.u16le();
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }

  std::vector<std::pair<std::uint32_t, std::vector<MmrNode>>> seen;
  auto nodes_for = [&](std::uint32_t id) -> std::vector<MmrNode>& {
    for (auto& [bid, nodes] : seen) {
      if (bid == id) return nodes;
    }
    return seen.emplace_back(id, std::vector<MmrNode>{}).second;
  };

  NodeStore store;
  bool finalized = false;
  while (!r.done()) {
    const std::size_t offset = r.position();
    try {
      if (finalized) throw DecodeError("record after meta record");
      const std::uint8_t tag = r.u8();
      if (tag == kNodeTag) {
        const std::uint32_t branch_id = r.u32le();
        const std::uint64_t index = r.u64le();
        std::vector<MmrNode>& nodes = nodes_for(branch_id);
        if (index != nodes.size()) {
          throw DecodeError("node index " + std::to_string(index) + " out of order in branch " +
                            std::to_string(branch_id));
        }
        nodes.push_back(read_node_record(r.bytes(kNodeRecordSize)));
      } else if (tag == kMetaTag) {
        store.digest_ = r.hash();
        const std::uint32_t count = r.u32le();
        for (std::uint32_t k = 0; k < count; ++k) {
          StoreBranch b;
          b.branch_id = r.u32le();
          b.start_height = r.u64le();
          b.leaf_count = r.u64le();
          store.branches_.push_back(b);
        }
        finalized = true;
      } else {
        throw DecodeError("unknown record tag " + std::to_string(tag));
      }
    } catch (const DecodeError& e) {
      throw DecodeError(path.string() + " at offset " + std::to_string(offset) + ": " + e.what());
    }
  }
  if (!finalized) throw DecodeError(path.string() + ": store was never finalized");

  for (const StoreBranch& b : store.branches_) {
    std::vector<MmrNode> nodes;
    for (auto& [bid, ns] : seen) {
      if (bid == b.branch_id) nodes = std::move(ns);
    }
    if (nodes.size() != flyclient::node_count(b.leaf_count)) {
      throw DecodeError(path.string() + ": branch " + std::to_string(b.branch_id) + " holds " +
                        std::to_string(nodes.size()) + " nodes, meta implies " +
                        std::to_string(flyclient::node_count(b.leaf_count)));
    }
    store.owned_.push_back(std::move(nodes));
  }
  for (const auto& [bid, ns] : seen) {
    if (!ns.empty()) throw DecodeError(path.string() + ": nodes for undeclared branch " + std::to_string(bid));
  }
  return store;
}

StoreWriter::StoreWriter(const std::filesystem::path& path, std::vector<StoreBranch> branches)
    : path_(path) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error("cannot write " + path.string());
  ByteWriter w;
  w.bytes(ByteSpan(kMagic, 4));
  w.u16le(kVersion);
  w.u16le(0);
  out_.write(reinterpret_cast<const char*>(w.view().data()), static_cast<std::streamsize>(w.size()));
  store_.branches_ = std::move(branches);
  store_.owned_.resize(store_.branches_.size());
}

StoreWriter::~StoreWriter() = default;

void StoreWriter::append(std::uint32_t branch_id, std::uint64_t index, const MmrNode& node) {
  if (finalized_) throw ContractError("store already finalized");
  std::vector<MmrNode>& nodes = store_.owned_[store_.branch_slot(branch_id)];
  if (index != nodes.size()) throw ContractError("store is append-only; index out of order");
  std::uint8_t record[1 + 4 + 8 + kNodeRecordSize];
  record[0] = kNodeTag;
  for (int i = 0; i < 4; ++i) record[1 + i] = static_cast<std::uint8_t>(branch_id >> (8 * i));
  for (int i = 0; i < 8; ++i) record[5 + i] = static_cast<std::uint8_t>(index >> (8 * i));
  write_node_record(node, record + 13);
  out_.write(reinterpret_cast<const char*>(record), sizeof(record));
  nodes.push_back(node);
}

NodeStore StoreWriter::finalize(const Hash32& manifest_digest) {
  if (finalized_) throw ContractError("store already finalized");
  for (std::size_t k = 0; k < store_.branches_.size(); ++k) {
    if (store_.owned_[k].size() != node_count(store_.branches_[k].leaf_count)) {
      throw ContractError("branch " + std::to_string(store_.branches_[k].branch_id) +
                          " is incomplete");
    }
  }
  ByteWriter w;
  w.u8(kMetaTag);
  w.hash(manifest_digest);
  w.u32le(static_cast<std::uint32_t>(store_.branches_.size()));
  for (const StoreBranch& b : store_.branches_) {
    w.u32le(b.branch_id);
    w.u64le(b.start_height);
    w.u64le(b.leaf_count);
  }
  out_.write(reinterpret_cast<const char*>(w.view().data()), static_cast<std::streamsize>(w.size()));
  out_.close();
  if (!out_) throw Error("failed writing " + path_.string());
  finalized_ = true;
  store_.digest_ = manifest_digest;
  return std::move(store_);
}

const char* to_string(SyncMode mode) {
  return mode == SyncMode::kDuringSync ? "during-sync" : "post-hoc";
}

SyncMode sync_mode_from_string(const std::string& name) {
  if (name == "during-sync") return SyncMode::kDuringSync;
  if (name == "post-hoc") return SyncMode::kPostHoc;
  throw ContractError("unknown sync mode '" + name + "'");
}

NodeStore sync_store(const std::filesystem::path& chain_dir, SyncMode mode,
                     const std::filesystem::path& store_path) {
  const Manifest manifest = read_manifest(chain_dir);
  const HeaderRecords records = read_header_records(chain_dir, manifest);
  return sync_headers(manifest.consensus, records.headers, records.hashes, mode, store_path,
                      manifest.digest);
}

NodeStore sync_store(const Chain& chain, SyncMode mode, const std::filesystem::path& store_path) {
  return sync_headers(chain.consensus, chain.headers, chain.hashes, mode, store_path,
                      manifest_digest(chain));
}

}  // namespace flyclient
