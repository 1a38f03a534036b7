#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <random>
#include <vector>

#include "flyclient/chain/chain.hpp"
#include "flyclient/core/hash.hpp"
#include "flyclient/mmr/node.hpp"

namespace flytest {

inline flyclient::Hash32 random_hash(std::mt19937_64& rng) {
  flyclient::Hash32 h;
  for (auto& b : h.bytes) b = static_cast<std::uint8_t>(rng());
  return h;
}

inline std::vector<flyclient::LeafMeta> random_leaves(std::size_t n, std::uint64_t seed,
                                                      std::uint64_t height_offset = 0) {
  std::mt19937_64 rng(seed);
  std::vector<flyclient::LeafMeta> out(n);
  std::uint32_t time = 1'600'000'000u;
  for (std::size_t i = 0; i < n; ++i) {
    out[i].digest = random_hash(rng);
    time += 1 + static_cast<std::uint32_t>(rng() % 150);
    out[i].time = time;
    out[i].bits = 0x1d00ffffu - static_cast<std::uint32_t>(rng() % 0xffff);
    out[i].height = height_offset + i;
  }
  return out;
}

inline flyclient::Chain small_chain(std::uint64_t length, std::uint64_t seed,
                                    flyclient::PowKind engine = flyclient::PowKind::kMockSha,
                                    flyclient::ScheduleKind schedule = flyclient::ScheduleKind::kFixed,
                                    std::vector<std::uint64_t> upgrades = {}) {
  flyclient::ChainConfig cfg;
  cfg.length = length;
  cfg.seed = seed;
  cfg.engine = engine;
  cfg.schedule.kind = schedule;
  cfg.upgrades = std::move(upgrades);
  return flyclient::build_honest_chain(cfg);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("flyclient-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace flytest
