#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>

#include "flyclient/core/bytes.hpp"

namespace flyclient {

using U256 = boost::multiprecision::uint256_t;
using U512 = boost::multiprecision::uint512_t;

U256 u256_max();

U256 u256_from_be(ByteSpan data);
void u256_to_be(const U256& value, std::uint8_t* out32);
Bytes u256_be_bytes(const U256& value);
U256 u256_from_le(ByteSpan data);
void u256_to_le(const U256& value, std::uint8_t* out32);

// Fixed-width 64-digit lowercase hex, and a lenient parser (optional 0x, 1..64 digits).
std::string u256_hex(const U256& value);
U256 u256_from_hex(std::string_view hex);

// Digests compare as big-endian integers.
U256 digest_value(const Hash32& digest);

long double u256_to_ld(const U256& value);

// Bitcoin-style compact target. Negative or overflowing encodings raise DecodeError.
U256 compact_to_target(std::uint32_t bits);
std::uint32_t target_to_compact(const U256& target);

// floor(2^256 / (target + 1))
U256 work_from_target(const U256& target);
U256 work_from_bits(std::uint32_t bits);

// Largest target whose expected hash count is at least `difficulty`.
U256 target_for_difficulty(long double difficulty);

// floor(value * fraction) for fraction in [0, 1], at 64-bit fractional resolution.
U256 scale_fraction(const U256& value, long double fraction);

}  // namespace flyclient
