#pragma once

#include <cstdint>

#include "flyclient/core/bytes.hpp"

namespace flyclient {

inline constexpr std::uint64_t kGasPerNonZeroByte = 40;

struct GasPrices {
  double gas_price_gwei = 0.125;
  double token_usd = 2100.0;
};

struct GasEstimate {
  std::uint64_t bytes = 0;
  std::uint64_t nonzero_bytes = 0;
  std::uint64_t gas = 0;
  double cost_token = 0.0;
  double cost_usd = 0.0;
  // Size-only input: every byte was assumed non-zero.
  bool approximated = false;
};

GasEstimate gas_estimate(std::uint64_t byte_count, const GasPrices& prices = {});
GasEstimate gas_estimate(ByteSpan calldata, const GasPrices& prices = {});

}  // namespace flyclient
