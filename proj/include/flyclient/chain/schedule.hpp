#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flyclient {

enum class ScheduleKind : std::uint8_t { kFixed = 0, kLinear = 1, kRandomWalk = 2 };

const char* to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::kFixed;
  // Nominal difficulty in expected hashes per block (900 GH).
  long double base_difficulty = 9e11L;
  // Linear schedule: d(h) = base * (1 + growth * h).
  long double growth = 2e-5L;
  // Random walk on log-difficulty with mean reversion toward the base.
  double sigma = 0.02;
  double kappa = 0.01;
  // Plausibility bound on the target ratio of adjacent blocks.
  double tau = 4.0;
};

// One block's difficulty-relevant stamp.
struct BlockStamp {
  std::uint64_t height = 0;
  std::uint32_t time = 0;
  std::uint32_t bits = 0;
};

class DifficultySchedule {
 public:
  explicit DifficultySchedule(ScheduleConfig config);

  const ScheduleConfig& config() const { return config_; }

  // Compact targets for heights 0..n-1.
  std::vector<std::uint32_t> generate_bits(std::uint64_t n, std::uint64_t seed) const;
  // Extends a random walk (or evaluates a deterministic schedule) from `from`.
  std::vector<std::uint32_t> continue_bits(const BlockStamp& from, std::uint64_t count,
                                           std::uint64_t seed) const;

  // Exact bits for deterministic schedules, nullopt for the random walk.
  std::optional<std::uint32_t> expected_bits(std::uint64_t height) const;

  bool bits_plausible(const BlockStamp& prev, const BlockStamp& next) const;

 private:
  std::uint32_t bits_for(long double difficulty) const;

  ScheduleConfig config_;
};

// Seconds allowed between consecutive timestamps: (0, kMaxTimeStep].
inline constexpr std::uint32_t kMaxTimeStep = 600;
inline constexpr std::uint32_t kBlockSpacing = 75;
inline constexpr std::uint32_t kSpacingJitter = 30;

bool validate_transition(const DifficultySchedule& schedule, const BlockStamp& prev,
                         const BlockStamp& candidate);

}  // namespace flyclient
