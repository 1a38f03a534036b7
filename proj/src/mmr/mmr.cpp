#include "flyclient/mmr/mmr.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "flyclient/core/error.hpp"

namespace flyclient {

std::uint64_t node_count(std::uint64_t leaf_count) {
  return 2 * leaf_count - static_cast<std::uint64_t>(std::popcount(leaf_count));
}

std::uint64_t leaf_position(std::uint64_t leaf) {
  return 2 * leaf - static_cast<std::uint64_t>(std::popcount(leaf));
}

std::uint64_t subtree_position(unsigned level, std::uint64_t index) {
  const std::uint64_t last_leaf = ((index + 1) << level) - 1;
  return leaf_position(last_leaf) + level;
}

namespace {

struct Mountain {
  unsigned level;
  std::uint64_t index;
};

std::vector<Mountain> mountains(std::uint64_t leaf_count) {
  std::vector<Mountain> out;
  std::uint64_t start = 0;
  for (int level = 63; level >= 0; --level) {
    const std::uint64_t size = std::uint64_t{1} << level;
    if (leaf_count & size) {
      out.push_back({static_cast<unsigned>(level), start >> level});
      start += size;
    }
  }
  return out;
}

LeafInterval interval_of(unsigned level, std::uint64_t index) {
  return {index << level, ((index + 1) << level) - 1};
}

}  // namespace

std::vector<std::uint64_t> peak_positions(std::uint64_t leaf_count) {
  std::vector<std::uint64_t> out;
  for (const Mountain& m : mountains(leaf_count)) out.push_back(subtree_position(m.level, m.index));
  return out;
}

LeafInterval position_interval(std::uint64_t position) {
  // Walk down from the smallest MMR containing `position` until it is a peak.
  std::uint64_t leaves = 1;
  while (node_count(leaves) <= position) leaves *= 2;
  unsigned level = static_cast<unsigned>(std::countr_zero(leaves));
  std::uint64_t index = 0;
  while (true) {
    const std::uint64_t pos = subtree_position(level, index);
    if (pos == position) return interval_of(level, index);
    const std::uint64_t left = subtree_position(level - 1, 2 * index);
    if (position <= left) {
      index = 2 * index;
    } else {
      index = 2 * index + 1;
    }
    --level;
  }
}

namespace {

class LeafSet {
 public:
  explicit LeafSet(const std::vector<std::uint64_t>& leaves) : s_(leaves.begin(), leaves.end()) {}
  std::uint64_t count_in(LeafInterval iv) const {
    auto lo = s_.lower_bound(iv.first);
    auto hi = s_.upper_bound(iv.last);
    return static_cast<std::uint64_t>(std::distance(lo, hi));
  }

 private:
  std::set<std::uint64_t> s_;
};

void cover(unsigned level, std::uint64_t index, const LeafSet& targets, const LeafSet& held,
           std::vector<std::uint64_t>& out) {
  const LeafInterval iv = interval_of(level, index);
  if (targets.count_in(iv) == 0) {
    const std::uint64_t span = iv.last - iv.first + 1;
    if (held.count_in(iv) < span) out.push_back(subtree_position(level, index));
    return;
  }
  if (level == 0) return;
  cover(level - 1, 2 * index, targets, held, out);
  cover(level - 1, 2 * index + 1, targets, held, out);
}

}  // namespace

std::vector<std::uint64_t> ancestry_proof_indices(std::uint64_t leaf_count, std::uint64_t target) {
  return cumulative_proof_indices(leaf_count, {target});
}

std::vector<std::uint64_t> cumulative_proof_indices(std::uint64_t leaf_count,
                                                    const std::vector<std::uint64_t>& targets) {
  return cumulative_proof_indices(leaf_count, targets, {});
}

std::vector<std::uint64_t> cumulative_proof_indices(std::uint64_t leaf_count,
                                                    const std::vector<std::uint64_t>& targets,
                                                    const std::vector<std::uint64_t>& known) {
  if (targets.empty()) throw ContractError("cumulative proof needs at least one target");
  for (std::uint64_t t : targets) {
    if (t >= leaf_count) {
      throw ContractError("target leaf " + std::to_string(t) + " outside MMR of " +
                          std::to_string(leaf_count) + " leaves");
    }
  }
  std::vector<std::uint64_t> held = known;
  held.insert(held.end(), targets.begin(), targets.end());
  const LeafSet target_set(targets);
  const LeafSet held_set(held);
  std::vector<std::uint64_t> out;
  for (const Mountain& m : mountains(leaf_count)) cover(m.level, m.index, target_set, held_set, out);
  std::sort(out.begin(), out.end());
  return out;
}

U256 AncestryCheck::work_before(std::uint64_t leaf) const {
  U256 sum = 0;
  for (const FrontierEntry& e : frontier) {
    if (e.leaves.first >= leaf) {
      if (e.leaves.first != leaf || !e.supplied_leaf) {
        throw ContractError("leaf " + std::to_string(leaf) + " is not a supplied leaf");
      }
      return sum;
    }
    sum += e.node.work;
  }
  throw ContractError("leaf " + std::to_string(leaf) + " is not in the frontier");
}

namespace {

class Rebuilder {
 public:
  Rebuilder(const std::map<std::uint64_t, MmrNode>& leaves,
            const std::map<std::uint64_t, MmrNode>& proof, const NodeContext& ctx,
            std::uint64_t offset, AncestryCheck& out)
      : leaves_(leaves), proof_(proof), ctx_(ctx), offset_(offset), out_(out) {}

  bool build(unsigned level, std::uint64_t index, MmrNode& result) {
    const std::uint64_t pos = subtree_position(level, index);
    const LeafInterval iv = interval_of(level, index);
    auto it = proof_.find(pos);
    if (it != proof_.end()) {
      const std::uint64_t subtree_nodes = (std::uint64_t{2} << level) - 1;
      auto inner = proof_.lower_bound(pos + 1 - subtree_nodes);
      if (inner != proof_.end() && inner->first < pos) {
        return structural("node " + std::to_string(inner->first) + " overlaps node " +
                          std::to_string(pos));
      }
      auto leaf = leaves_.lower_bound(iv.first);
      if (leaf != leaves_.end() && leaf->first <= iv.last) {
        return structural("leaf " + std::to_string(leaf->first) + " overlaps node " +
                          std::to_string(pos));
      }
      if (it->second.earliest_height != offset_ + iv.first ||
          it->second.latest_height != offset_ + iv.last) {
        out_.status = ProofStatus::kMismatch;
        out_.detail = "node " + std::to_string(pos) + " claims heights " +
                      std::to_string(it->second.earliest_height) + ".." +
                      std::to_string(it->second.latest_height);
        return false;
      }
      ++used_proof_;
      result = it->second;
      out_.frontier.push_back({pos, iv, result, false});
      return true;
    }
    if (level == 0) {
      auto leaf = leaves_.find(iv.first);
      if (leaf == leaves_.end()) {
        return structural("gap at leaf " + std::to_string(iv.first));
      }
      if (leaf->second.earliest_height != offset_ + iv.first) {
        out_.status = ProofStatus::kMismatch;
        out_.detail = "leaf " + std::to_string(iv.first) + " has height " +
                      std::to_string(leaf->second.earliest_height);
        return false;
      }
      ++used_leaves_;
      result = leaf->second;
      out_.frontier.push_back({pos, iv, result, true});
      return true;
    }
    MmrNode left;
    MmrNode right;
    if (!build(level - 1, 2 * index, left)) return false;
    if (!build(level - 1, 2 * index + 1, right)) return false;
    result = merge_nodes(left, right, ctx_);
    out_.reconstructed.emplace(pos, result);
    return true;
  }

  std::size_t used_proof() const { return used_proof_; }
  std::size_t used_leaves() const { return used_leaves_; }

 private:
  bool structural(std::string detail) {
    out_.status = ProofStatus::kStructural;
    out_.detail = std::move(detail);
    return false;
  }

  const std::map<std::uint64_t, MmrNode>& leaves_;
  const std::map<std::uint64_t, MmrNode>& proof_;
  const NodeContext& ctx_;
  std::uint64_t offset_;
  AncestryCheck& out_;
  std::size_t used_proof_ = 0;
  std::size_t used_leaves_ = 0;
};

}  // namespace

MmrNode fold_peaks(const std::vector<MmrNode>& peaks, const NodeContext& ctx) {
  if (peaks.empty()) throw ContractError("root of an empty MMR is undefined");
  MmrNode acc = peaks.back();
  for (std::size_t i = peaks.size() - 1; i-- > 0;) acc = merge_nodes(peaks[i], acc, ctx);
  return acc;
}

AncestryCheck reconstruct_root(std::uint64_t leaf_count,
                               const std::map<std::uint64_t, MmrNode>& leaves,
                               const std::map<std::uint64_t, MmrNode>& proof,
                               const NodeContext& ctx, std::uint64_t height_offset) {
  AncestryCheck out;
  if (leaf_count == 0) {
    out.status = ProofStatus::kStructural;
    out.detail = "empty MMR";
    return out;
  }
  Rebuilder rebuilder(leaves, proof, ctx, height_offset, out);
  std::vector<MmrNode> peaks;
  for (const Mountain& m : mountains(leaf_count)) {
    MmrNode peak;
    if (!rebuilder.build(m.level, m.index, peak)) return out;
    peaks.push_back(std::move(peak));
  }
  if (rebuilder.used_proof() != proof.size()) {
    out.status = ProofStatus::kStructural;
    out.detail = std::to_string(proof.size() - rebuilder.used_proof()) + " unused proof nodes";
    return out;
  }
  if (rebuilder.used_leaves() != leaves.size()) {
    out.status = ProofStatus::kStructural;
    out.detail = std::to_string(leaves.size() - rebuilder.used_leaves()) + " unbound leaves";
    return out;
  }
  out.root = fold_peaks(peaks, ctx);
  return out;
}

AncestryCheck verify_ancestry(const Hash32& expected_root, const std::vector<SampledLeaf>& sampled,
                              const AncestryProof& proof, std::uint64_t leaf_count,
                              const NodeContext& ctx, std::uint64_t height_offset) {
  AncestryCheck fail;
  if (proof.node_indices.size() != proof.nodes.size()) {
    fail.status = ProofStatus::kStructural;
    fail.detail = "proof index and node lists differ in length";
    return fail;
  }
  std::map<std::uint64_t, MmrNode> leaves;
  for (const SampledLeaf& s : sampled) {
    if (s.leaf >= leaf_count || s.meta.height != height_offset + s.leaf) {
      fail.status = ProofStatus::kStructural;
      fail.detail = "sampled leaf " + std::to_string(s.leaf) + " out of place";
      return fail;
    }
    if (!leaves.emplace(s.leaf, make_leaf(s.meta, ctx)).second) {
      fail.status = ProofStatus::kStructural;
      fail.detail = "duplicate sampled leaf " + std::to_string(s.leaf);
      return fail;
    }
  }
  std::map<std::uint64_t, MmrNode> nodes;
  for (std::size_t i = 0; i < proof.nodes.size(); ++i) {
    if (!nodes.emplace(proof.node_indices[i], proof.nodes[i]).second) {
      fail.status = ProofStatus::kStructural;
      fail.detail = "duplicate proof node " + std::to_string(proof.node_indices[i]);
      return fail;
    }
  }
  AncestryCheck out = reconstruct_root(leaf_count, leaves, nodes, ctx, height_offset);
  if (out.ok() && out.root.commitment != expected_root) {
    out.status = ProofStatus::kMismatch;
    out.detail = "reconstructed root differs from commitment";
  }
  return out;
}

Mmr Mmr::from_nodes(NodeContext ctx, std::uint64_t height_offset, std::vector<MmrNode> nodes) {
  Mmr mmr(ctx, height_offset);
  std::uint64_t leaves = 0;
  while (node_count(leaves) < nodes.size()) ++leaves;
  if (node_count(leaves) != nodes.size()) {
    throw DecodeError(std::to_string(nodes.size()) + " is not a valid MMR node count");
  }
  mmr.leaf_count_ = leaves;
  mmr.nodes_ = std::move(nodes);
  return mmr;
}

std::vector<std::uint64_t> Mmr::append_leaf(const LeafMeta& meta) {
  if (meta.height != height_offset_ + leaf_count_) {
    throw ContractError("append height " + std::to_string(meta.height) + ", expected " +
                        std::to_string(height_offset_ + leaf_count_));
  }
  std::vector<std::uint64_t> created;
  created.push_back(nodes_.size());
  nodes_.push_back(make_leaf(meta, ctx_));
  const int merges = std::countr_one(leaf_count_);
  for (int h = 0; h < merges; ++h) {
    const std::uint64_t right = nodes_.size() - 1;
    const std::uint64_t left = right - ((std::uint64_t{2} << h) - 1);
    MmrNode parent = merge_nodes(nodes_[left], nodes_[right], ctx_);
    created.push_back(nodes_.size());
    nodes_.push_back(std::move(parent));
  }
  ++leaf_count_;
  return created;
}

const MmrNode& Mmr::node(std::uint64_t index) const {
  if (index >= nodes_.size()) {
    throw NotFoundError("node index " + std::to_string(index) + " beyond " +
                        std::to_string(nodes_.size()));
  }
  return nodes_[index];
}

MmrNode Mmr::root_node(std::uint64_t leaves) const {
  if (leaves == 0) throw ContractError("root of an empty MMR is undefined");
  if (leaves > leaf_count_) throw ContractError("snapshot longer than MMR");
  std::vector<MmrNode> peaks;
  for (std::uint64_t p : peak_positions(leaves)) peaks.push_back(nodes_[p]);
  return fold_peaks(peaks, ctx_);
}

Mmr Mmr::prefix(std::uint64_t leaves) const {
  if (leaves > leaf_count_) throw ContractError("prefix longer than MMR");
  Mmr out(ctx_, height_offset_);
  out.leaf_count_ = leaves;
  out.nodes_.assign(nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(node_count(leaves)));
  return out;
}

AncestryProof Mmr::collect(const std::vector<std::uint64_t>& indices) const {
  AncestryProof proof;
  proof.node_indices = indices;
  for (std::uint64_t i : indices) proof.nodes.push_back(nodes_[i]);
  return proof;
}

AncestryProof Mmr::ancestry_proof(std::uint64_t target) const {
  return collect(ancestry_proof_indices(leaf_count_, target));
}

AncestryProof Mmr::cumulative_proof(const std::vector<std::uint64_t>& targets) const {
  return collect(cumulative_proof_indices(leaf_count_, targets));
}

}  // namespace flyclient
