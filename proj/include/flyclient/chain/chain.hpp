#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flyclient/chain/header.hpp"
#include "flyclient/chain/pow.hpp"
#include "flyclient/chain/schedule.hpp"
#include "flyclient/mmr/batch.hpp"
#include "flyclient/mmr/mmr.hpp"

namespace flyclient {

// Zcash consensus branch ids from Heartwood onward; later upgrades get derived ids.
std::uint32_t default_branch_id(std::size_t branch_index);

// Rules a light client knows without talking to any prover.
struct ConsensusParams {
  PowKind engine = PowKind::kMockSha;
  ScheduleConfig schedule;
  std::vector<std::uint64_t> upgrade_heights;
  std::vector<std::uint32_t> branch_ids;
  U256 difficulty_scale = 1;

  PowEngine pow() const { return {engine, difficulty_scale}; }
  NodeFormat node_format() const;
  DifficultySchedule difficulty() const { return DifficultySchedule(schedule); }

  std::size_t branch_count() const { return upgrade_heights.size() + 1; }
  std::size_t branch_index(std::uint64_t height) const;
  std::uint64_t branch_start(std::size_t index) const;
  NodeContext node_context(std::size_t index) const;
  // Branch whose MMR header `height` commits to: the previous branch for the
  // first header of a branch, otherwise its own. Undefined for genesis.
  std::size_t committed_branch(std::uint64_t height) const;
};

struct ChainConfig {
  std::uint64_t length = 1;
  PowKind engine = PowKind::kMockSha;
  ScheduleConfig schedule;
  std::vector<std::uint64_t> upgrades;
  std::uint64_t seed = 0;
};

ConsensusParams make_consensus(const ChainConfig& config);

struct ChainBranch {
  std::uint32_t branch_id = 0;
  std::uint64_t start_height = 0;
  // Exclusive; the last branch ends at the tip.
  std::uint64_t end_height = 0;
  Mmr mmr;
};

struct ForkInfo {
  std::uint64_t fork_height = 0;
  std::uint64_t valid_blocks = 0;
  std::uint64_t invalid_blocks = 0;
  U256 valid_work = 0;
  U256 work_budget = 0;
  double validity_ratio = 1.0;
  std::uint64_t seed = 0;
};

class Chain {
 public:
  ConsensusParams consensus;
  std::uint64_t seed = 0;
  std::vector<Header> headers;
  std::vector<Hash32> hashes;
  std::vector<Hash32> auth_roots;
  std::vector<U256> cumulative_work;
  std::vector<ChainBranch> branches;
  std::optional<ForkInfo> fork;

  std::uint64_t length() const { return headers.size(); }
  std::uint64_t tip_height() const { return headers.size() - 1; }
  const Header& tip() const { return headers.back(); }
  const Header& header(std::uint64_t height) const;

  U256 total_work(std::uint64_t height) const;
  // Smallest height whose cumulative work reaches x.
  std::uint64_t height_with_total_work(const U256& x) const;

  LeafMeta leaf_meta(std::uint64_t height) const;
  const ChainBranch& branch_for(std::uint64_t height) const;
  // Root of the MMR that header `height` commits to (zero for genesis).
  Hash32 expected_history_root(std::uint64_t height) const;
};

Chain build_honest_chain(const ChainConfig& config);

struct ForkSpec {
  std::uint64_t fork_height = 0;
  U256 work_budget = 0;
  double validity_ratio = 1.0;
  std::uint64_t seed = 0;
};

// Honest prefix through fork_height, then invalid-PoW padding followed by the
// valid blocks that fit in the budget, so the tail looks freshly mined.
Chain build_adversarial_fork(const Chain& honest, const ForkSpec& spec);

// Re-mines the tip with a different nonce salt; nothing else changes.
Chain remine_tip(const Chain& chain, std::uint64_t salt);

// Consecutive-header check: BlockStamp transition plus prev-hash linkage.
bool validate_transition(const ConsensusParams& consensus, std::span<const Header> window,
                         const Header& candidate);

BlockStamp stamp_of(const Header& header);

// PoW validity of every header; kParallel splits the range across OpenMP threads.
std::vector<std::uint8_t> check_pow(const ConsensusParams& consensus,
                                    std::span<const Header> headers, Kernel kernel);

}  // namespace flyclient
