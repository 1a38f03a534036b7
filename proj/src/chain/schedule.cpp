#include "flyclient/chain/schedule.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "flyclient/core/error.hpp"
#include "flyclient/core/work.hpp"

namespace flyclient {

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kFixed:
      return "fixed";
    case ScheduleKind::kLinear:
      return "linear";
    case ScheduleKind::kRandomWalk:
      return "random-walk";
  }
  return "unknown";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "fixed") return ScheduleKind::kFixed;
  if (name == "linear") return ScheduleKind::kLinear;
  if (name == "random-walk") return ScheduleKind::kRandomWalk;
  throw ContractError("unknown difficulty schedule '" + name + "'");
}

DifficultySchedule::DifficultySchedule(ScheduleConfig config) : config_(config) {
  if (!(config_.tau > 1.0)) throw DomainError("tau must exceed 1");
  if (!(config_.base_difficulty >= 1.0L)) throw DomainError("base difficulty must be at least 1");
}

std::uint32_t DifficultySchedule::bits_for(long double difficulty) const {
  if (!(difficulty >= 1.0L) || difficulty > 1.8e19L) {
    throw DomainError("schedule difficulty " + std::to_string(static_cast<double>(difficulty)) +
                      " leaves the representable target range");
  }
  return target_to_compact(target_for_difficulty(difficulty));
}

std::optional<std::uint32_t> DifficultySchedule::expected_bits(std::uint64_t height) const {
  switch (config_.kind) {
    case ScheduleKind::kFixed:
      return bits_for(config_.base_difficulty);
    case ScheduleKind::kLinear:
      return bits_for(config_.base_difficulty *
                      (1.0L + config_.growth * static_cast<long double>(height)));
    case ScheduleKind::kRandomWalk:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// Box-Muller over mt19937_64 so the walk is identical across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double next() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::vector<std::uint32_t> DifficultySchedule::continue_bits(const BlockStamp& from,
                                                             std::uint64_t count,
                                                             std::uint64_t seed) const {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  if (config_.kind != ScheduleKind::kRandomWalk) {
    for (std::uint64_t i = 1; i <= count; ++i) out.push_back(*expected_bits(from.height + i));
    return out;
  }
  const long double base = config_.base_difficulty;
  long double x = std::log(u256_to_ld(work_from_bits(from.bits)) / base);
  const long double max_step = std::log(static_cast<long double>(config_.tau)) * 0.9L;
  Gaussian gauss(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t i = 0; i < count; ++i) {
    long double step = -config_.kappa * x + config_.sigma * gauss.next();
    if (step > max_step) step = max_step;
    if (step < -max_step) step = -max_step;
    x += step;
    out.push_back(bits_for(base * std::exp(x)));
  }
  return out;
}

std::vector<std::uint32_t> DifficultySchedule::generate_bits(std::uint64_t n,
                                                             std::uint64_t seed) const {
  if (n == 0) return {};
  std::vector<std::uint32_t> out;
  out.reserve(n);
  const std::uint32_t genesis = bits_for(config_.base_difficulty);
  out.push_back(config_.kind == ScheduleKind::kLinear ? *expected_bits(0) : genesis);
  const std::vector<std::uint32_t> rest = continue_bits({0, 0, out.front()}, n - 1, seed);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

bool DifficultySchedule::bits_plausible(const BlockStamp& prev, const BlockStamp& next) const {
  if (const auto expected = expected_bits(next.height)) return next.bits == *expected;
  long double a;
  long double b;
  try {
    a = u256_to_ld(compact_to_target(prev.bits));
    b = u256_to_ld(compact_to_target(next.bits));
  } catch (const DecodeError&) {
    return false;
  }
  if (a <= 0 || b <= 0) return false;
  const long double ratio = b / a;
  return ratio <= config_.tau && ratio >= 1.0L / config_.tau;
}

bool validate_transition(const DifficultySchedule& schedule, const BlockStamp& prev,
                         const BlockStamp& candidate) {
  if (candidate.height != prev.height + 1) return false;
  if (candidate.time <= prev.time || candidate.time - prev.time > kMaxTimeStep) return false;
  return schedule.bits_plausible(prev, candidate);
}

}  // namespace flyclient
