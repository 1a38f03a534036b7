#include "flyclient/core/work.hpp"

#include <cmath>

#include "flyclient/core/error.hpp"

namespace flyclient {

namespace mp = boost::multiprecision;

U256 u256_max() { return ~U256(0); }

U256 u256_from_be(ByteSpan data) {
  if (data.size() != 32) throw DecodeError("256-bit value must be 32 bytes");
  U256 v = 0;
  for (std::uint8_t b : data) v = (v << 8) | b;
  return v;
}

void u256_to_be(const U256& value, std::uint8_t* out32) {
  U256 v = value;
  for (int i = 31; i >= 0; --i) {
    out32[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
}

Bytes u256_be_bytes(const U256& value) {
  Bytes out(32);
  u256_to_be(value, out.data());
  return out;
}

U256 u256_from_le(ByteSpan data) {
  if (data.size() != 32) throw DecodeError("256-bit value must be 32 bytes");
  U256 v = 0;
  for (int i = 31; i >= 0; --i) v = (v << 8) | data[i];
  return v;
}

void u256_to_le(const U256& value, std::uint8_t* out32) {
  U256 v = value;
  for (int i = 0; i < 32; ++i) {
    out32[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
}

std::string u256_hex(const U256& value) {
  std::uint8_t raw[32];
  u256_to_be(value, raw);
  return to_hex(ByteSpan(raw, 32));
}

U256 u256_from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 64) throw DecodeError("256-bit hex must have 1..64 digits");
  std::string padded(64 - hex.size(), '0');
  padded.append(hex);
  const Bytes raw = from_hex(padded);
  return u256_from_be(raw);
}

U256 digest_value(const Hash32& digest) { return u256_from_be(digest.span()); }

long double u256_to_ld(const U256& value) { return value.convert_to<long double>(); }

U256 compact_to_target(std::uint32_t bits) {
  const std::uint32_t size = bits >> 24;
  std::uint32_t word = bits & 0x007fffff;
  if (word != 0 && (bits & 0x00800000) != 0) throw DecodeError("negative compact target");
  U256 target;
  if (size <= 3) {
    word >>= 8 * (3 - size);
    target = word;
  } else {
    if (word != 0 && (size > 34 || (word > 0xff && size > 33) || (word > 0xffff && size > 32))) {
      throw DecodeError("compact target overflows 256 bits");
    }
    target = U256(word) << (8 * (size - 3));
  }
  return target;
}

std::uint32_t target_to_compact(const U256& target) {
  std::uint32_t size = static_cast<std::uint32_t>((mp::msb(target | 1) + 8) / 8);
  if (target == 0) size = 0;
  std::uint32_t compact;
  if (size <= 3) {
    compact = static_cast<std::uint32_t>(target) << (8 * (3 - size));
  } else {
    compact = static_cast<std::uint32_t>(target >> (8 * (size - 3)));
  }
  if (compact & 0x00800000) {
    compact >>= 8;
    ++size;
  }
  return compact | (size << 24);
}

U256 work_from_target(const U256& target) {
  if (target == u256_max()) return 1;
  // 2^256 / (t+1) == (~t / (t+1)) + 1 without needing a 257-bit numerator.
  return (~target / (target + 1)) + 1;
}

U256 work_from_bits(std::uint32_t bits) { return work_from_target(compact_to_target(bits)); }

U256 target_for_difficulty(long double difficulty) {
  if (!(difficulty >= 1.0L)) throw DomainError("difficulty must be at least 1");
  const U256 d(static_cast<unsigned long long>(std::floor(difficulty)));
  return u256_max() / d;
}

U256 scale_fraction(const U256& value, long double fraction) {
  if (!(fraction >= 0.0L) || fraction > 1.0L) throw DomainError("fraction must lie in [0, 1]");
  const long double scaled = std::ldexp(fraction, 64);
  if (scaled >= std::ldexp(1.0L, 64)) return value;
  const U512 numerator = U512(value) * U512(static_cast<unsigned long long>(scaled));
  return static_cast<U256>(numerator >> 64);
}

}  // namespace flyclient
