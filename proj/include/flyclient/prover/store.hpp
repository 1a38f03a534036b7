#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "flyclient/chain/storage.hpp"

namespace flyclient {

struct StoreBranch {
  std::uint32_t branch_id = 0;
  std::uint64_t start_height = 0;
  std::uint64_t leaf_count = 0;

  bool operator==(const StoreBranch&) const = default;
};

// MMR nodes keyed by (branch_id, index). On disk it is a single append-only
// log: an 8-byte file header, node records, then one closing meta record.
//
//   file header   "FLYS" | version u16 | reserved u16
//   node record   tag 0x01 | branch_id u32 | index u64 | 276-byte node record
//   meta record   tag 0x02 | manifest digest [32] | branch count u32
//                 | per branch: branch_id u32, start u64, leaf count u64
class NodeStore {
 public:
  NodeStore() = default;

  // Replays a finalized log into the in-memory index.
  static NodeStore open(const std::filesystem::path& path);
  // Serves nodes straight from an already-built chain without copying them.
  static NodeStore borrow(std::shared_ptr<const Chain> chain);

  const Hash32& manifest_digest() const { return digest_; }
  const std::vector<StoreBranch>& branches() const { return branches_; }
  std::uint64_t node_count(std::uint32_t branch_id) const;
  std::uint64_t total_nodes() const;
  // NotFoundError for an unknown branch or index.
  const MmrNode& node(std::uint32_t branch_id, std::uint64_t index) const;
  const Chain* borrowed_chain() const { return borrowed_.get(); }

 private:
  friend class StoreWriter;
  std::size_t branch_slot(std::uint32_t branch_id) const;
  const std::vector<MmrNode>& nodes_of(std::size_t slot) const;

  Hash32 digest_;
  std::vector<StoreBranch> branches_;
  std::vector<std::vector<MmrNode>> owned_;
  std::shared_ptr<const Chain> borrowed_;
};

// Single writer for a store log. Indices must arrive in order per branch.
class StoreWriter {
 public:
  StoreWriter(const std::filesystem::path& path, std::vector<StoreBranch> branches);
  ~StoreWriter();
  StoreWriter(const StoreWriter&) = delete;
  StoreWriter& operator=(const StoreWriter&) = delete;

  void append(std::uint32_t branch_id, std::uint64_t index, const MmrNode& node);
  // Writes the meta record, closes the file and returns the store.
  NodeStore finalize(const Hash32& manifest_digest);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  NodeStore store_;
  bool finalized_ = false;
};

enum class SyncMode { kDuringSync, kPostHoc };

const char* to_string(SyncMode mode);
SyncMode sync_mode_from_string(const std::string& name);

// Builds the node store for a persisted chain. kDuringSync appends each
// header's nodes as it is read; kPostHoc reads every finalized header first and
// rebuilds each branch with the parallel kernel. Both write identical bytes.
NodeStore sync_store(const std::filesystem::path& chain_dir, SyncMode mode,
                     const std::filesystem::path& store_path);
NodeStore sync_store(const Chain& chain, SyncMode mode, const std::filesystem::path& store_path);

}  // namespace flyclient
