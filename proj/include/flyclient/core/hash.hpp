#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "flyclient/core/bytes.hpp"

namespace flyclient {

using HashFunction = Hash32 (*)(ByteSpan);

Hash32 sha256(ByteSpan data);

// SHA-256 over the concatenation of `parts`.
Hash32 sha256_concat(std::initializer_list<ByteSpan> parts);

// Domain-separated digest: SHA-256(tag || data).
Hash32 tagged_hash(std::string_view tag, ByteSpan data);

}  // namespace flyclient

namespace flyclient {

// Seed-derived pseudo-random material: SHA-256(tag || seed || index || block).
Hash32 seeded_digest(std::string_view tag, std::uint64_t seed, std::uint64_t index);
Bytes seeded_bytes(std::string_view tag, std::uint64_t seed, std::uint64_t index, std::size_t n);
std::uint64_t seeded_u64(std::string_view tag, std::uint64_t seed, std::uint64_t index);

}  // namespace flyclient
