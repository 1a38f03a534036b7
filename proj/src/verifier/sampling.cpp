#include "flyclient/verifier/sampling.hpp"

#include <cmath>

#include "flyclient/core/error.hpp"
#include "flyclient/core/hash.hpp"

namespace flyclient {

namespace {

long double fraction_for(long double delta, long double u) {
  if (!(delta > 0.0L && delta < 1.0L)) throw DomainError("delta must lie in (0, 1)");
  if (!(u >= 0.0L && u < 1.0L)) throw DomainError("u must lie in [0, 1)");
  return -std::expm1(u * std::log(delta));
}

}  // namespace

U256 sample_work(const U256& w_total, long double delta, long double u) {
  return scale_fraction(w_total, fraction_for(delta, u));
}

std::uint64_t sample_height_fixed(std::uint64_t block_count, long double delta, long double u) {
  const U256 x = sample_work(U256(block_count), delta, u);
  return x == 0 ? 0 : static_cast<std::uint64_t>(x) - 1;
}

Hash32 fiat_shamir_seed(ByteSpan tip_bytes) { return sha256(tip_bytes); }

Hash32 fiat_shamir_digest(const Hash32& seed, std::uint64_t index) {
  std::uint8_t le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(index >> (8 * i));
  return sha256_concat({seed.span(), ByteSpan(le, 8)});
}

long double fiat_shamir_uniform(const Hash32& seed, std::uint64_t index) {
  const long double u = std::ldexp(u256_to_ld(digest_value(fiat_shamir_digest(seed, index))), -256);
  // Rounding to long double can reach 1.0 for digests within 2^-64 of the top.
  return u < 1.0L ? u : std::nextafter(1.0L, 0.0L);
}

DrawSource DrawSource::interactive(std::uint64_t seed) {
  DrawSource s;
  s.rng_.seed(seed);
  return s;
}

DrawSource DrawSource::fiat_shamir(const Hash32& seed) {
  DrawSource s;
  s.fs_ = true;
  s.seed_ = seed;
  return s;
}

long double DrawSource::next() {
  const std::uint64_t i = index_++;
  if (fs_) return fiat_shamir_uniform(seed_, i);
  return std::ldexp(static_cast<long double>(rng_()), -64);
}

}  // namespace flyclient
