#include "flyclient/codec/gas.hpp"

#include <algorithm>

namespace flyclient {

namespace {

GasEstimate price(std::uint64_t bytes, std::uint64_t nonzero, const GasPrices& prices) {
  GasEstimate e;
  e.bytes = bytes;
  e.nonzero_bytes = nonzero;
  e.gas = kGasPerNonZeroByte * nonzero;
  e.cost_token = static_cast<double>(e.gas) * prices.gas_price_gwei * 1e-9;
  e.cost_usd = e.cost_token * prices.token_usd;
  return e;
}

}  // namespace

GasEstimate gas_estimate(std::uint64_t byte_count, const GasPrices& prices) {
  GasEstimate e = price(byte_count, byte_count, prices);
  e.approximated = true;
  return e;
}

GasEstimate gas_estimate(ByteSpan calldata, const GasPrices& prices) {
  const auto nonzero = static_cast<std::uint64_t>(
      std::count_if(calldata.begin(), calldata.end(), [](std::uint8_t b) { return b != 0; }));
  return price(calldata.size(), nonzero, prices);
}

}  // namespace flyclient
