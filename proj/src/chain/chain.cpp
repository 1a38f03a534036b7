#include "flyclient/chain/chain.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "flyclient/core/error.hpp"
#include "flyclient/core/hash.hpp"

namespace flyclient {

namespace {

constexpr std::uint32_t kGenesisTime = 1'600'000'000;

constexpr std::uint32_t kKnownBranchIds[] = {0xF5B9230B, 0xE9FF75A6, 0xC2D6D0B4, 0xC8E71055,
                                             0x4DEC4DF0};

}  // namespace

std::uint32_t default_branch_id(std::size_t branch_index) {
  if (branch_index < std::size(kKnownBranchIds)) return kKnownBranchIds[branch_index];
  return static_cast<std::uint32_t>(seeded_u64("branch-id", 0, branch_index));
}

NodeFormat ConsensusParams::node_format() const {
  return engine == PowKind::kEthashStub ? NodeFormat::kDistilled : NodeFormat::kZcash;
}

std::size_t ConsensusParams::branch_index(std::uint64_t height) const {
  return static_cast<std::size_t>(
      std::upper_bound(upgrade_heights.begin(), upgrade_heights.end(), height) -
      upgrade_heights.begin());
}

std::uint64_t ConsensusParams::branch_start(std::size_t index) const {
  if (index == 0) return 0;
  if (index > upgrade_heights.size()) throw ContractError("branch index out of range");
  return upgrade_heights[index - 1];
}

NodeContext ConsensusParams::node_context(std::size_t index) const {
  if (index >= branch_ids.size()) throw ContractError("branch index out of range");
  return {node_format(), branch_ids[index]};
}

std::size_t ConsensusParams::committed_branch(std::uint64_t height) const {
  if (height == 0) throw ContractError("genesis commits to no MMR");
  const std::size_t k = branch_index(height);
  return (k > 0 && branch_start(k) == height) ? k - 1 : k;
}

ConsensusParams make_consensus(const ChainConfig& config) {
  if (config.length == 0) throw ContractError("chain needs at least one block");
  for (std::size_t i = 0; i < config.upgrades.size(); ++i) {
    const std::uint64_t u = config.upgrades[i];
    if (u == 0 || u >= config.length) {
      throw ContractError("upgrade height " + std::to_string(u) + " outside (0, " +
                          std::to_string(config.length) + ")");
    }
    if (i > 0 && u <= config.upgrades[i - 1]) {
      throw ContractError("upgrade heights must be strictly ascending");
    }
  }
  ConsensusParams p;
  p.engine = config.engine;
  p.schedule = config.schedule;
  p.upgrade_heights = config.upgrades;
  for (std::size_t k = 0; k <= config.upgrades.size(); ++k) p.branch_ids.push_back(default_branch_id(k));
  const long double scale = std::floor(config.schedule.base_difficulty / 4.0L);
  p.difficulty_scale = U256(static_cast<unsigned long long>(std::max(scale, 1.0L)));
  DifficultySchedule check(config.schedule);
  (void)check;
  return p;
}

const Header& Chain::header(std::uint64_t height) const {
  if (height >= headers.size()) {
    throw NotFoundError("height " + std::to_string(height) + " beyond tip " +
                        std::to_string(tip_height()));
  }
  return headers[height];
}

U256 Chain::total_work(std::uint64_t height) const {
  if (height >= cumulative_work.size()) {
    throw NotFoundError("height " + std::to_string(height) + " beyond tip");
  }
  return cumulative_work[height];
}

std::uint64_t Chain::height_with_total_work(const U256& x) const {
  auto it = std::lower_bound(cumulative_work.begin(), cumulative_work.end(), x);
  if (it == cumulative_work.end()) throw NotFoundError("work exceeds the chain's total work");
  return static_cast<std::uint64_t>(it - cumulative_work.begin());
}

LeafMeta Chain::leaf_meta(std::uint64_t height) const {
  const Header& h = header(height);
  return {hashes[height], h.time, h.bits, height};
}

const ChainBranch& Chain::branch_for(std::uint64_t height) const {
  return branches[consensus.branch_index(height)];
}

Hash32 Chain::expected_history_root(std::uint64_t height) const {
  if (height == 0) return Hash32{};
  const std::size_t k = consensus.committed_branch(height);
  const ChainBranch& b = branches[k];
  const std::uint64_t end = std::min(height, b.end_height);
  return b.mmr.root_node(end - b.start_height).commitment;
}

BlockStamp stamp_of(const Header& header) { return {header.height, header.time, header.bits}; }

bool validate_transition(const ConsensusParams& consensus, std::span<const Header> window,
                         const Header& candidate) {
  if (window.empty()) throw ContractError("transition window is empty");
  const Header& prev = window.back();
  if (candidate.prev_hash != header_hash(prev)) return false;
  return validate_transition(consensus.difficulty(), stamp_of(prev), stamp_of(candidate));
}

std::vector<std::uint8_t> check_pow(const ConsensusParams& consensus,
                                    std::span<const Header> headers, Kernel kernel) {
  const PowEngine pow = consensus.pow();
  std::vector<std::uint8_t> ok(headers.size());
  const auto n = static_cast<std::int64_t>(headers.size());
  if (kernel == Kernel::kSerial) {
    for (std::int64_t i = 0; i < n; ++i) ok[i] = pow.verify(headers[i]) ? 1 : 0;
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) ok[i] = pow.verify(headers[i]) ? 1 : 0;
  }
  return ok;
}

namespace {

// Appends headers one at a time, keeping branch MMRs one leaf behind the tip.
class ChainBuilder {
 public:
  explicit ChainBuilder(Chain& chain) : chain_(chain), pow_(chain.consensus.pow()) {}

  void init_branches(std::uint64_t length) {
    const ConsensusParams& c = chain_.consensus;
    for (std::size_t k = 0; k < c.branch_count(); ++k) {
      ChainBranch b;
      b.branch_id = c.branch_ids[k];
      b.start_height = c.branch_start(k);
      b.end_height = k + 1 < c.branch_count() ? c.branch_start(k + 1) : length;
      b.mmr = Mmr(c.node_context(k), b.start_height);
      chain_.branches.push_back(std::move(b));
    }
  }

  void append(std::uint32_t bits, std::uint64_t seed, bool valid) {
    const std::uint64_t h = chain_.headers.size();
    if (h > 0) {
      const std::size_t k = chain_.consensus.branch_index(h - 1);
      chain_.branches[k].mmr.append_leaf(chain_.leaf_meta(h - 1));
    }
    Header header;
    header.height = h;
    header.version = 4;
    header.prev_hash = h > 0 ? chain_.hashes[h - 1] : Hash32{};
    header.merkle_root = seeded_digest("merkle-root", seed, h);
    const Hash32 auth = h > 0 ? seeded_digest("auth-data", seed, h) : Hash32{};
    const Hash32 history = chain_.expected_history_root(h);
    header.block_commitments =
        chain_.consensus.engine == PowKind::kEthashStub ? history : commit_block(auth, history);
    if (h == 0) {
      header.time = kGenesisTime;
    } else {
      const std::uint64_t jitter = seeded_u64("time-jitter", seed, h) % (2 * kSpacingJitter + 1);
      header.time = chain_.headers[h - 1].time + kBlockSpacing + static_cast<std::uint32_t>(jitter) -
                    kSpacingJitter;
    }
    header.bits = bits;
    ByteWriter salt(8);
    salt.u64le(seeded_u64("nonce-salt", seed, h));
    std::copy(salt.view().begin(), salt.view().end(), header.nonce.bytes.begin() + 8);
    header.solution = seeded_bytes("solution", seed, h, solution_size(chain_.consensus.engine));
    pow_.mine(header, valid);

    const U256 work = work_from_bits(bits);
    chain_.cumulative_work.push_back(h > 0 ? chain_.cumulative_work.back() + work : work);
    chain_.hashes.push_back(header_hash(header));
    chain_.auth_roots.push_back(auth);
    chain_.headers.push_back(std::move(header));
  }

 private:
  Chain& chain_;
  PowEngine pow_;
};

}  // namespace

Chain build_honest_chain(const ChainConfig& config) {
  Chain chain;
  chain.consensus = make_consensus(config);
  chain.seed = config.seed;
  const std::vector<std::uint32_t> bits =
      chain.consensus.difficulty().generate_bits(config.length, config.seed);
  ChainBuilder builder(chain);
  builder.init_branches(config.length);
  chain.headers.reserve(config.length);
  for (std::uint64_t h = 0; h < config.length; ++h) builder.append(bits[h], config.seed, true);
  return chain;
}

namespace {

Chain truncated(const Chain& chain, std::uint64_t length) {
  Chain out;
  out.consensus = chain.consensus;
  out.seed = chain.seed;
  const auto n = static_cast<std::ptrdiff_t>(length);
  out.headers.assign(chain.headers.begin(), chain.headers.begin() + n);
  out.hashes.assign(chain.hashes.begin(), chain.hashes.begin() + n);
  out.auth_roots.assign(chain.auth_roots.begin(), chain.auth_roots.begin() + n);
  out.cumulative_work.assign(chain.cumulative_work.begin(), chain.cumulative_work.begin() + n);
  for (const ChainBranch& b : chain.branches) {
    ChainBranch copy;
    copy.branch_id = b.branch_id;
    copy.start_height = b.start_height;
    copy.end_height = b.end_height;
    const std::uint64_t covered_end = std::min(b.end_height, length - 1);
    const std::uint64_t leaves = covered_end > b.start_height ? covered_end - b.start_height : 0;
    copy.mmr = b.mmr.prefix(leaves);
    out.branches.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

Chain build_adversarial_fork(const Chain& honest, const ForkSpec& spec) {
  if (spec.fork_height >= honest.tip_height()) {
    throw ContractError("fork height must precede the honest tip");
  }
  if (!(spec.validity_ratio >= 0.0 && spec.validity_ratio <= 1.0)) {
    throw DomainError("validity ratio must lie in [0, 1]");
  }
  if (spec.work_budget == 0 && spec.validity_ratio > 0.0) {
    throw DomainError("a zero work budget admits no valid blocks");
  }
  const DifficultySchedule schedule = honest.consensus.difficulty();
  const BlockStamp from = stamp_of(honest.header(spec.fork_height));
  std::vector<std::uint32_t> bits;
  auto ensure_bits = [&](std::uint64_t count) {
    if (bits.size() >= count) return;
    const std::uint64_t target = std::max<std::uint64_t>(count, 2 * bits.size() + 64);
    bits = schedule.continue_bits(from, target, spec.seed);
  };
  auto work_at = [&](std::uint64_t i) { return work_from_bits(bits[i - 1]); };

  std::uint64_t valid = 0;
  std::uint64_t length = 0;
  auto length_for = [&](std::uint64_t k) {
    return std::max<std::uint64_t>(
        k, static_cast<std::uint64_t>(std::llround(static_cast<double>(k) / spec.validity_ratio)));
  };
  if (spec.validity_ratio == 0.0) {
    length = honest.tip_height() - spec.fork_height + 1;
  } else {
    constexpr std::uint64_t kMaxValid = 10'000'000;
    for (std::uint64_t k = 1; k <= kMaxValid; ++k) {
      const std::uint64_t len = length_for(k);
      ensure_bits(len);
      U256 tail = 0;
      for (std::uint64_t i = len - k + 1; i <= len; ++i) tail += work_at(i);
      if (tail > spec.work_budget) break;
      valid = k;
      if (k == kMaxValid) throw DomainError("work budget too large to materialize");
    }
    length = std::max<std::uint64_t>(1, length_for(valid));
  }
  ensure_bits(length);

  Chain out = truncated(honest, spec.fork_height + 1);
  const std::uint64_t total = spec.fork_height + 1 + length;
  for (std::size_t k = 0; k < out.branches.size(); ++k) {
    ChainBranch& b = out.branches[k];
    const std::uint64_t next = k + 1 < out.branches.size() ? out.branches[k + 1].start_height : total;
    b.end_height = std::max(b.start_height, std::min(next, total));
  }
  ChainBuilder builder(out);
  ForkInfo info;
  info.fork_height = spec.fork_height;
  info.work_budget = spec.work_budget;
  info.validity_ratio = spec.validity_ratio;
  info.seed = spec.seed;
  const std::uint64_t fork_seed = seeded_u64("fork-seed", spec.seed, spec.fork_height);
  for (std::uint64_t i = 1; i <= length; ++i) {
    const bool is_valid = i > length - valid;
    builder.append(bits[i - 1], fork_seed, is_valid);
    if (is_valid) {
      ++info.valid_blocks;
      info.valid_work += work_at(i);
    } else {
      ++info.invalid_blocks;
    }
  }
  if (info.valid_work > spec.work_budget) throw Error("fork exceeded its work budget");
  out.fork = info;
  return out;
}

Chain remine_tip(const Chain& chain, std::uint64_t salt) {
  Chain out = chain;
  Header& tip = out.headers.back();
  const PowEngine pow = out.consensus.pow();
  const bool valid = pow.verify(tip);
  ByteWriter w(8);
  w.u64le(salt);
  std::fill(tip.nonce.bytes.begin(), tip.nonce.bytes.begin() + 8, 0);
  std::copy(w.view().begin(), w.view().end(), tip.nonce.bytes.begin() + 8);
  pow.mine(tip, valid);
  out.hashes.back() = header_hash(tip);
  return out;
}

}  // namespace flyclient
