#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flyclient/mmr/node.hpp"

namespace flyclient {

// Creation-order (postorder) index arithmetic.
std::uint64_t node_count(std::uint64_t leaf_count);
std::uint64_t leaf_position(std::uint64_t leaf);
// Position of the node at `level` whose subtree starts at leaf `index << level`.
std::uint64_t subtree_position(unsigned level, std::uint64_t index);
std::vector<std::uint64_t> peak_positions(std::uint64_t leaf_count);

struct LeafInterval {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

// Leaf range below a persistent node of an MMR with at least that many nodes.
LeafInterval position_interval(std::uint64_t position);

std::vector<std::uint64_t> ancestry_proof_indices(std::uint64_t leaf_count, std::uint64_t target);
std::vector<std::uint64_t> cumulative_proof_indices(std::uint64_t leaf_count,
                                                    const std::vector<std::uint64_t>& targets);
// Leaves in `known` are already held by the caller and need no covering node.
std::vector<std::uint64_t> cumulative_proof_indices(std::uint64_t leaf_count,
                                                    const std::vector<std::uint64_t>& targets,
                                                    const std::vector<std::uint64_t>& known);

struct AncestryProof {
  std::vector<std::uint64_t> node_indices;
  std::vector<MmrNode> nodes;
};

enum class ProofStatus { kOk, kStructural, kMismatch };

struct FrontierEntry {
  std::uint64_t position = 0;
  LeafInterval leaves;
  MmrNode node;
  bool supplied_leaf = false;
};

struct AncestryCheck {
  ProofStatus status = ProofStatus::kOk;
  std::string detail;
  std::map<std::uint64_t, MmrNode> reconstructed;
  // The cover in left-to-right order, mixing supplied leaves and proof nodes.
  std::vector<FrontierEntry> frontier;
  MmrNode root;

  bool ok() const { return status == ProofStatus::kOk; }
  // Work of everything strictly left of `leaf` (which must be a supplied leaf).
  U256 work_before(std::uint64_t leaf) const;
};

// Rebuilds the root from supplied leaves plus proof nodes, checking that they
// tile the MMR exactly and that every node's height range matches its slot.
AncestryCheck reconstruct_root(std::uint64_t leaf_count,
                               const std::map<std::uint64_t, MmrNode>& leaves,
                               const std::map<std::uint64_t, MmrNode>& proof,
                               const NodeContext& ctx, std::uint64_t height_offset);

struct SampledLeaf {
  std::uint64_t leaf = 0;
  LeafMeta meta;
};

AncestryCheck verify_ancestry(const Hash32& expected_root, const std::vector<SampledLeaf>& sampled,
                              const AncestryProof& proof, std::uint64_t leaf_count,
                              const NodeContext& ctx, std::uint64_t height_offset = 0);

MmrNode fold_peaks(const std::vector<MmrNode>& peaks, const NodeContext& ctx);

class Mmr {
 public:
  explicit Mmr(NodeContext ctx = {}, std::uint64_t height_offset = 0)
      : ctx_(ctx), height_offset_(height_offset) {}

  static Mmr from_nodes(NodeContext ctx, std::uint64_t height_offset, std::vector<MmrNode> nodes);

  std::vector<std::uint64_t> append_leaf(const LeafMeta& meta);

  std::uint64_t leaf_count() const { return leaf_count_; }
  std::uint64_t size() const { return nodes_.size(); }
  bool empty() const { return leaf_count_ == 0; }
  const MmrNode& node(std::uint64_t index) const;
  const std::vector<MmrNode>& nodes() const { return nodes_; }
  const NodeContext& context() const { return ctx_; }
  std::uint64_t height_offset() const { return height_offset_; }

  std::vector<std::uint64_t> peaks() const { return peak_positions(leaf_count_); }
  MmrNode root_node() const { return root_node(leaf_count_); }
  Hash32 root() const { return root_node().commitment; }
  // Root of the earlier snapshot over the first `leaves` leaves.
  MmrNode root_node(std::uint64_t leaves) const;

  // Snapshot of the same MMR when it covered only the first `leaves` leaves.
  Mmr prefix(std::uint64_t leaves) const;

  AncestryProof ancestry_proof(std::uint64_t target) const;
  AncestryProof cumulative_proof(const std::vector<std::uint64_t>& targets) const;

 private:
  AncestryProof collect(const std::vector<std::uint64_t>& indices) const;

  NodeContext ctx_;
  std::uint64_t height_offset_ = 0;
  std::uint64_t leaf_count_ = 0;
  std::vector<MmrNode> nodes_;
};

}  // namespace flyclient
