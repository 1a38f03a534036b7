#pragma once

#include <cstdint>
#include <random>

#include "flyclient/core/work.hpp"

namespace flyclient {

// x = floor(w_total * (1 - delta^u)), the inverse CDF of the sampling density
// over the fraction of work preceding the deterministic suffix.
U256 sample_work(const U256& w_total, long double delta, long double u);

// sample_work with unit work per block: the height of block number ceil(x).
std::uint64_t sample_height_fixed(std::uint64_t block_count, long double delta, long double u);

// Fiat-Shamir schedule: seed = SHA-256(tip bytes), u_i = int(SHA-256(seed || i_le64)) / 2^256.
Hash32 fiat_shamir_seed(ByteSpan tip_bytes);
Hash32 fiat_shamir_digest(const Hash32& seed, std::uint64_t index);
long double fiat_shamir_uniform(const Hash32& seed, std::uint64_t index);

// Uniform draws in [0, 1): seeded mt19937_64, or the Fiat-Shamir schedule.
class DrawSource {
 public:
  static DrawSource interactive(std::uint64_t seed);
  static DrawSource fiat_shamir(const Hash32& seed);

  long double next();
  std::uint64_t drawn() const { return index_; }

 private:
  bool fs_ = false;
  std::mt19937_64 rng_;
  Hash32 seed_;
  std::uint64_t index_ = 0;
};

}  // namespace flyclient
