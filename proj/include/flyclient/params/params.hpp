#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flyclient {

enum class ProofMode : std::uint8_t { kInteractive = 0, kNonInteractive = 1 };
enum class DifficultyModel : std::uint8_t { kFixed = 0, kVariable = 1 };

const char* to_string(ProofMode mode);
ProofMode proof_mode_from_string(const std::string& name);

struct SamplingCounts {
  std::uint64_t n_det = 0;
  std::uint64_t n_prob = 0;
  // Unrounded n_prob.
  double n_prob_exact = 0.0;
  std::uint64_t total() const { return n_det + n_prob; }
};

// Round half up, as used for every sampling count.
std::uint64_t round_half_up(double x);

// lambda / log_0.5(1 - 1/log_c(delta))
double interactive_n_prob(double c, double lambda, double delta);
// (lambda - log_0.5(c n)) / log_0.5(1 - 1/log_c(delta))
double noninteractive_n_prob(double c, double lambda, double n, double delta);

SamplingCounts interactive_counts(double c, std::uint64_t L, double lambda, double n, double delta);
SamplingCounts noninteractive_counts(double c, std::uint64_t L, double lambda, double n,
                                     double delta);
SamplingCounts sampling_counts(ProofMode mode, double c, std::uint64_t L, double lambda, double n,
                               double delta);

struct VerifierParams {
  double c = 0.5;
  std::uint64_t L = 100;
  double lambda = 50;
  double n = 0;
  double delta = 0;
  std::uint64_t n_det = 0;
  std::uint64_t n_prob = 0;
  ProofMode mode = ProofMode::kInteractive;
  DifficultyModel difficulty_model = DifficultyModel::kFixed;
};

// Fixed-difficulty parametrization with delta = L / n.
VerifierParams make_params(double c, std::uint64_t L, double lambda, std::uint64_t n,
                           ProofMode mode);

// First-order-condition residuals for the optimal validity ratio.
double foc_interactive(double c, double n_a, double n, double lambda);
double foc_noninteractive(double c, double n_a, double n, double lambda);

struct Optimum {
  // Root of the first-order condition (or grid minimizer on fallback).
  double c_root = 0.0;
  double residual = 0.0;
  bool bracketed = false;
  // Integer fork length minimizing the rounded total near the root, and c = n_a / L.
  std::uint64_t L = 0;
  double c = 0.0;
  SamplingCounts counts;
};

Optimum optimal_c_interactive(double n_a, double n, double lambda);
Optimum optimal_c_noninteractive(double n_a, double n, double lambda);
Optimum optimal_c(ProofMode mode, double n_a, double n, double lambda);

// Total samplings for validity ratio c when the adversary's block budget is n_a,
// using the smallest integer L with c * L >= n_a.
SamplingCounts counts_for_budget(ProofMode mode, double c, double n_a, double n, double lambda);

// Smallest L whose most recent L difficulties sum to at least w_a / c.
// `difficulties` is ordered oldest first.
std::uint64_t reduce_wa_to_cl(double w_a, std::span<const double> difficulties, double c);
// Fixed-difficulty shortcut: ceil((w_a / c) / d_tilde).
std::uint64_t reduce_wa_to_cl(double w_a, double d_tilde, double c);

// True when the coefficient of variation of the last L difficulties is below threshold.
bool difficulty_is_fixed(std::span<const double> difficulties, std::uint64_t L, double threshold);

// Work fraction held by the last L blocks.
double delta_for(std::span<const double> difficulties, std::uint64_t L, double threshold);

struct AdversaryBudget {
  double w_a = 0;
  double d_tilde = 0;
  double c51_per_hour = 0;
  double honest_blocks_per_hour = 0;
  double n_a() const { return w_a / d_tilde; }
};

double expected_budget(const AdversaryBudget& budget);

}  // namespace flyclient
