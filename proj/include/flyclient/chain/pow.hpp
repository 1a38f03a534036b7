#pragma once

#include <cstdint>

#include "flyclient/chain/header.hpp"
#include "flyclient/core/work.hpp"

namespace flyclient {

// Mock proof of work: the digest must fall below target * difficulty_scale,
// so a block of difficulty d costs about d / difficulty_scale attempts.
struct PowEngine {
  PowKind kind = PowKind::kMockSha;
  U256 difficulty_scale = 1;

  U256 effective_target(std::uint32_t bits) const;

  Hash32 pow_digest(const Header& header) const;
  Hash32 pow_digest(const DistilledHeader& header) const;

  bool verify(const Header& header) const;
  bool verify(const DistilledHeader& header) const;

  // Bumps the nonce counter until the header is valid (or, with
  // want_valid=false, until it is provably invalid).
  void mine(Header& header, bool want_valid = true) const;
};

// Ethash-style final digest over the distilled fields.
Hash32 distilled_pow_digest(const Hash32& header_hash, const Hash32& mixhash,
                            const Hash32& chain_history_root, std::uint32_t bits,
                            std::uint32_t time);

}  // namespace flyclient
