#include "flyclient/core/hash.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <memory>

#include "flyclient/core/error.hpp"

namespace flyclient {

Hash32 sha256(ByteSpan data) {
  Hash32 out;
  SHA256(data.data(), data.size(), out.bytes.data());
  return out;
}

Hash32 sha256_concat(std::initializer_list<ByteSpan> parts) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("EVP_DigestInit_ex failed");
  }
  for (ByteSpan part : parts) {
    if (EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1) {
      throw Error("EVP_DigestUpdate failed");
    }
  }
  Hash32 out;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.bytes.data(), &len) != 1 || len != Hash32::kSize) {
    throw Error("EVP_DigestFinal_ex failed");
  }
  return out;
}

Hash32 tagged_hash(std::string_view tag, ByteSpan data) {
  const ByteSpan tag_bytes(reinterpret_cast<const std::uint8_t*>(tag.data()), tag.size());
  return sha256_concat({tag_bytes, data});
}

}  // namespace flyclient

namespace flyclient {

namespace {

Hash32 seeded_block(std::string_view tag, std::uint64_t seed, std::uint64_t index,
                    std::uint64_t block) {
  ByteWriter w(24);
  w.u64le(seed);
  w.u64le(index);
  w.u64le(block);
  return tagged_hash(tag, w.view());
}

}  // namespace

Hash32 seeded_digest(std::string_view tag, std::uint64_t seed, std::uint64_t index) {
  return seeded_block(tag, seed, index, 0);
}

Bytes seeded_bytes(std::string_view tag, std::uint64_t seed, std::uint64_t index, std::size_t n) {
  Bytes out;
  out.reserve(n + Hash32::kSize);
  for (std::uint64_t block = 0; out.size() < n; ++block) {
    const Hash32 h = seeded_block(tag, seed, index, block);
    out.insert(out.end(), h.bytes.begin(), h.bytes.end());
  }
  out.resize(n);
  return out;
}

std::uint64_t seeded_u64(std::string_view tag, std::uint64_t seed, std::uint64_t index) {
  const Hash32 h = seeded_digest(tag, seed, index);
  ByteReader r(h.span());
  return r.u64le();
}

}  // namespace flyclient
