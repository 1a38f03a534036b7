#include "flyclient/chain/pow.hpp"

#include "flyclient/core/error.hpp"
#include "flyclient/core/hash.hpp"

namespace flyclient {

U256 PowEngine::effective_target(std::uint32_t bits) const {
  const U512 scaled = U512(compact_to_target(bits)) * U512(difficulty_scale);
  if (scaled > U512(u256_max())) return u256_max();
  return static_cast<U256>(scaled);
}

Hash32 distilled_pow_digest(const Hash32& header_hash, const Hash32& mixhash,
                            const Hash32& chain_history_root, std::uint32_t bits,
                            std::uint32_t time) {
  ByteWriter tail(8);
  tail.u32le(bits);
  tail.u32le(time);
  return sha256_concat(
      {header_hash.span(), mixhash.span(), chain_history_root.span(), tail.view()});
}

Hash32 PowEngine::pow_digest(const Header& header) const {
  if (kind == PowKind::kEthashStub) {
    const DistilledHeader d = distill(header);
    return pow_digest(d);
  }
  return header_hash(header);
}

Hash32 PowEngine::pow_digest(const DistilledHeader& header) const {
  if (kind != PowKind::kEthashStub) {
    throw FormatError(std::string("distilled headers are not defined for ") + to_string(kind));
  }
  return distilled_pow_digest(header.header_hash, header.mixhash, header.chain_history_root,
                              header.bits, header.time);
}

bool PowEngine::verify(const Header& header) const {
  if (header.solution.size() != solution_size(kind)) return false;
  try {
    return digest_value(pow_digest(header)) < effective_target(header.bits);
  } catch (const DecodeError&) {
    return false;
  }
}

bool PowEngine::verify(const DistilledHeader& header) const {
  try {
    return digest_value(pow_digest(header)) < effective_target(header.bits);
  } catch (const DecodeError&) {
    return false;
  }
}

void PowEngine::mine(Header& header, bool want_valid) const {
  const U256 target = effective_target(header.bits);
  if (!want_valid && target == u256_max()) throw ContractError("every digest meets this target");
  ByteReader r(header.nonce.span());
  std::uint64_t counter = r.u64le();
  for (;;) {
    for (int i = 0; i < 8; ++i) header.nonce.bytes[i] = static_cast<std::uint8_t>(counter >> (8 * i));
    const bool valid = digest_value(pow_digest(header)) < target;
    if (valid == want_valid) return;
    ++counter;
    if (counter == 0) throw Error("nonce space exhausted");
  }
}

}  // namespace flyclient
