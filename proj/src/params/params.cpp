#include "flyclient/params/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flyclient/core/error.hpp"

namespace flyclient {

const char* to_string(ProofMode mode) {
  return mode == ProofMode::kInteractive ? "interactive" : "non-interactive";
}

ProofMode proof_mode_from_string(const std::string& name) {
  if (name == "interactive") return ProofMode::kInteractive;
  if (name == "non-interactive") return ProofMode::kNonInteractive;
  throw ContractError("unknown proof mode '" + name + "'");
}

std::uint64_t round_half_up(double x) {
  if (x <= 0) return 0;
  return static_cast<std::uint64_t>(std::floor(x + 0.5));
}

namespace {

void check_domain(double c, double delta) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("c must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

// log_0.5(1 - 1/log_c(delta)), positive on the valid domain.
double sample_denominator(double c, double delta) {
  const double log_c_delta = std::log(delta) / std::log(c);
  const double inner = 1.0 - 1.0 / log_c_delta;
  if (!(inner > 0.0 && inner < 1.0)) {
    throw DomainError("delta must be below c for the sampling bound to exist");
  }
  return -std::log2(inner);
}

}  // namespace

double interactive_n_prob(double c, double lambda, double delta) {
  check_domain(c, delta);
  return lambda / sample_denominator(c, delta);
}

double noninteractive_n_prob(double c, double lambda, double n, double delta) {
  check_domain(c, delta);
  if (!(n > 0)) throw DomainError("chain length must be positive");
  return (lambda + std::log2(c * n)) / sample_denominator(c, delta);
}

SamplingCounts interactive_counts(double c, std::uint64_t L, double lambda, double /*n*/,
                                  double delta) {
  if (L == 0) throw DomainError("L must be at least 1");
  SamplingCounts out;
  out.n_det = L;
  out.n_prob_exact = lambda == 0 ? 0.0 : interactive_n_prob(c, lambda, delta);
  out.n_prob = round_half_up(out.n_prob_exact);
  return out;
}

SamplingCounts noninteractive_counts(double c, std::uint64_t L, double lambda, double n,
                                     double delta) {
  if (L == 0) throw DomainError("L must be at least 1");
  SamplingCounts out;
  out.n_det = L;
  out.n_prob_exact = noninteractive_n_prob(c, lambda, n, delta);
  out.n_prob = round_half_up(out.n_prob_exact);
  return out;
}

SamplingCounts sampling_counts(ProofMode mode, double c, std::uint64_t L, double lambda, double n,
                               double delta) {
  return mode == ProofMode::kInteractive ? interactive_counts(c, L, lambda, n, delta)
                                         : noninteractive_counts(c, L, lambda, n, delta);
}

VerifierParams make_params(double c, std::uint64_t L, double lambda, std::uint64_t n,
                           ProofMode mode) {
  VerifierParams p;
  p.c = c;
  p.L = L;
  p.lambda = lambda;
  p.n = static_cast<double>(n);
  p.delta = static_cast<double>(L) / static_cast<double>(n);
  p.mode = mode;
  p.difficulty_model = DifficultyModel::kFixed;
  const SamplingCounts counts = sampling_counts(mode, c, L, lambda, p.n, p.delta);
  p.n_det = counts.n_det;
  p.n_prob = counts.n_prob;
  return p;
}

double foc_interactive(double c, double n_a, double n, double lambda) {
  const double a = std::log(n_a / (c * n));
  const double lc = std::log(c);
  const double y = 1.0 - lc / a;
  const double ly = std::log(y);
  return lambda * c * c * std::log(2.0) * (-lc / (a * a * c) - 1.0 / (a * c)) -
         n_a * y * ly * ly;
}

double foc_noninteractive(double c, double n_a, double n, double lambda) {
  const double a = std::log(n_a / (c * n));
  const double b = std::log(n_a / (c * c * n));
  const double lba = std::log(b / a);
  return (lba * n_a + c) * lba * a * b +
         c * std::log(n_a / n) * (lambda * std::log(2.0) + std::log(c * n));
}

SamplingCounts counts_for_budget(ProofMode mode, double c, double n_a, double n, double lambda) {
  const double raw = n_a / c;
  auto L = static_cast<std::uint64_t>(std::ceil(raw - 1e-9 * raw));
  L = std::max<std::uint64_t>(L, 1);
  return sampling_counts(mode, c, L, lambda, n, static_cast<double>(L) / n);
}

namespace {

using Residual = double (*)(double, double, double, double);

// Continuous total n_a/c + n_prob(c), the objective the first-order condition differentiates.
double smooth_total(ProofMode mode, double c, double n_a, double n, double lambda) {
  const double delta = n_a / (c * n);
  const double prob = mode == ProofMode::kInteractive
                          ? interactive_n_prob(c, lambda, delta)
                          : noninteractive_n_prob(c, lambda, n, delta);
  return n_a / c + prob;
}

Optimum solve(ProofMode mode, double n_a, double n, double lambda) {
  if (!(n_a >= 1.0 && n_a < n)) throw DomainError("need 1 <= n_a < n");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  const Residual f = mode == ProofMode::kInteractive ? foc_interactive : foc_noninteractive;
  // Below sqrt(n_a / n) the deterministic fraction n_a / (c n) exceeds c.
  const double lo_bound = std::sqrt(n_a / n);
  Optimum out;

  // Scan a log-spaced grid for sign changes, bisect each, and keep the root
  // with the smallest objective (the residual also flips sign at the domain edge).
  constexpr int kSteps = 4000;
  const double lo_log = std::log(lo_bound) + 1e-9;
  const double hi_log = std::log(1.0 - 1e-9);
  double prev_c = std::exp(lo_log);
  double prev_f = f(prev_c, n_a, n, lambda);
  double best_objective = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kSteps; ++i) {
    const double cur_c = std::exp(lo_log + (hi_log - lo_log) * i / kSteps);
    const double cur_f = f(cur_c, n_a, n, lambda);
    if (std::isfinite(prev_f) && std::isfinite(cur_f) && (prev_f < 0) != (cur_f < 0)) {
      double a = prev_c;
      double b = cur_c;
      double fa = prev_f;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m, n_a, n, lambda);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double root = 0.5 * (a + b);
      const double objective = smooth_total(mode, root, n_a, n, lambda);
      if (std::isfinite(objective) && objective < best_objective) {
        best_objective = objective;
        out.c_root = root;
        out.residual = f(root, n_a, n, lambda);
        out.bracketed = true;
      }
    }
    prev_c = cur_c;
    prev_f = cur_f;
  }

  if (!out.bracketed) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i < 1000; ++i) {
      const double c = i / 1000.0;
      if (c <= lo_bound) continue;
      const double total = static_cast<double>(counts_for_budget(mode, c, n_a, n, lambda).total());
      if (total < best) {
        best = total;
        out.c_root = c;
      }
    }
    if (!std::isfinite(best)) throw DomainError("no admissible validity ratio");
    out.residual = f(out.c_root, n_a, n, lambda);
  }

  // Integer refinement: walk L outward from n_a / c_root until the smooth
  // objective exceeds the best rounded total by more than one sampling.
  const auto L0 = std::max<std::uint64_t>(
      static_cast<std::uint64_t>(std::llround(n_a / out.c_root)),
      static_cast<std::uint64_t>(std::ceil(n_a)));
  std::uint64_t best_L = 0;
  SamplingCounts best_counts;
  auto consider = [&](std::uint64_t L) {
    const double c = n_a / static_cast<double>(L);
    if (!(c < 1.0) || c <= lo_bound) return false;
    const SamplingCounts counts =
        sampling_counts(mode, c, L, lambda, n, static_cast<double>(L) / n);
    if (best_L == 0 || counts.total() < best_counts.total()) {
      best_L = L;
      best_counts = counts;
    }
    return true;
  };
  consider(L0);
  for (int dir : {-1, 1}) {
    for (std::uint64_t L = L0;;) {
      if (dir < 0 && L <= 1) break;
      L = dir < 0 ? L - 1 : L + 1;
      const double c = n_a / static_cast<double>(L);
      if (!(c < 1.0) || c <= lo_bound) break;
      consider(L);
      if (smooth_total(mode, c, n_a, n, lambda) > static_cast<double>(best_counts.total()) + 1.0) {
        break;
      }
    }
  }
  if (best_L == 0) throw DomainError("no admissible fork length near the optimum");
  out.L = best_L;
  out.c = n_a / static_cast<double>(best_L);
  out.counts = best_counts;
  return out;
}

}  // namespace

Optimum optimal_c_interactive(double n_a, double n, double lambda) {
  return solve(ProofMode::kInteractive, n_a, n, lambda);
}

Optimum optimal_c_noninteractive(double n_a, double n, double lambda) {
  return solve(ProofMode::kNonInteractive, n_a, n, lambda);
}

Optimum optimal_c(ProofMode mode, double n_a, double n, double lambda) {
  return solve(mode, n_a, n, lambda);
}

std::uint64_t reduce_wa_to_cl(double w_a, std::span<const double> difficulties, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
  const double need = w_a / c;
  double tail = 0.0;
  for (std::size_t nu = 1; nu <= difficulties.size(); ++nu) {
    tail += difficulties[difficulties.size() - nu];
    if (tail >= need * (1.0 - 1e-12)) return nu;
  }
  throw DomainError("w_a / c exceeds the total chain work");
}

std::uint64_t reduce_wa_to_cl(double w_a, double d_tilde, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
  if (!(d_tilde > 0.0)) throw DomainError("average difficulty must be positive");
  const double q = (w_a / c) / d_tilde;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(q - 1e-9 * q)));
}

bool difficulty_is_fixed(std::span<const double> difficulties, std::uint64_t L, double threshold) {
  const std::size_t k = std::min<std::size_t>(L, difficulties.size());
  if (k == 0) return true;
  const auto tail = difficulties.subspan(difficulties.size() - k);
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(k);
  double var = 0.0;
  for (double d : tail) var += (d - mean) * (d - mean);
  var /= static_cast<double>(k);
  return std::sqrt(var) / mean < threshold;
}

double delta_for(std::span<const double> difficulties, std::uint64_t L, double threshold) {
  if (difficulties.empty() || L == 0) throw DomainError("delta needs L >= 1 and a non-empty chain");
  const std::size_t k = std::min<std::size_t>(L, difficulties.size());
  if (difficulty_is_fixed(difficulties, L, threshold)) {
    return static_cast<double>(k) / static_cast<double>(difficulties.size());
  }
  const double total = std::accumulate(difficulties.begin(), difficulties.end(), 0.0);
  const double tail = std::accumulate(difficulties.end() - static_cast<std::ptrdiff_t>(k),
                                      difficulties.end(), 0.0);
  return tail / total;
}

double expected_budget(const AdversaryBudget& b) {
  if (!(b.d_tilde > 0.0 && b.honest_blocks_per_hour > 0.0)) {
    throw DomainError("budget denominators must be positive");
  }
  return b.c51_per_hour * b.w_a / (b.d_tilde * b.honest_blocks_per_hour);
}

}  // namespace flyclient
