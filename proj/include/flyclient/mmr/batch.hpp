#pragma once

#include <vector>

#include "flyclient/mmr/mmr.hpp"

namespace flyclient {

enum class Kernel { kSerial, kParallel };

// Builds every persistent node for `leaves` in creation order.
// kSerial replays append_leaf; kParallel fills each tree level with OpenMP.
std::vector<MmrNode> build_nodes(const std::vector<LeafMeta>& leaves, const NodeContext& ctx,
                                 Kernel kernel);

Mmr build_mmr(const std::vector<LeafMeta>& leaves, const NodeContext& ctx,
              std::uint64_t height_offset, Kernel kernel);

}  // namespace flyclient
