#include "flyclient/mmr/batch.hpp"

#include <omp.h>

#include <bit>
#include <cstdint>

namespace flyclient {

namespace {

std::vector<MmrNode> build_serial(const std::vector<LeafMeta>& leaves, const NodeContext& ctx) {
  Mmr mmr(ctx, leaves.empty() ? 0 : leaves.front().height);
  for (const LeafMeta& leaf : leaves) mmr.append_leaf(leaf);
  return mmr.nodes();
}

std::vector<MmrNode> build_parallel(const std::vector<LeafMeta>& leaves, const NodeContext& ctx) {
  const std::uint64_t n = leaves.size();
  std::vector<MmrNode> nodes(node_count(n));
  const auto count = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto leaf = static_cast<std::uint64_t>(i);
    nodes[leaf_position(leaf)] = make_leaf(leaves[leaf], ctx);
  }

  for (unsigned level = 1; (std::uint64_t{1} << level) <= n; ++level) {
    const auto width = static_cast<std::int64_t>(n >> level);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < width; ++s) {
      const auto index = static_cast<std::uint64_t>(s);
      const MmrNode& left = nodes[subtree_position(level - 1, 2 * index)];
      const MmrNode& right = nodes[subtree_position(level - 1, 2 * index + 1)];
      nodes[subtree_position(level, index)] = merge_nodes(left, right, ctx);
    }
  }
  return nodes;
}

}  // namespace

std::vector<MmrNode> build_nodes(const std::vector<LeafMeta>& leaves, const NodeContext& ctx,
                                 Kernel kernel) {
  return kernel == Kernel::kSerial ? build_serial(leaves, ctx) : build_parallel(leaves, ctx);
}

Mmr build_mmr(const std::vector<LeafMeta>& leaves, const NodeContext& ctx,
              std::uint64_t height_offset, Kernel kernel) {
  return Mmr::from_nodes(ctx, height_offset, build_nodes(leaves, ctx, kernel));
}

}  // namespace flyclient
