#pragma once

#include <span>

#include "flyclient/verifier/noninteractive.hpp"

namespace flyclient {

// Byte and item counts of one verification run (or one non-interactive proof).
struct ProofSize {
  bool accepted = false;
  std::uint64_t json = 0;
  std::uint64_t binary = 0;
  // Interactive: each item compressed on its own. Non-interactive: whole bundle.
  std::uint64_t zipped = 0;
  // The other compression scope, for comparison.
  std::uint64_t zipped_alt = 0;
  std::uint64_t headers = 0;
  std::uint64_t nodes = 0;
  std::uint64_t infos = 0;
  std::uint64_t auth_roots = 0;
  std::uint64_t total_works = 0;
  std::uint64_t heights = 0;
};

ProofSize measure_proof(std::shared_ptr<const ProverService> prover, const ConsensusParams& consensus,
                        const VerifierParams& params, const SessionOptions& options);

// `reps` runs with independent randomness, returned in rep order. Interactive
// runs use sampling seed base_seed + r; non-interactive runs re-mine the tip
// with salt r (rep 0 keeps the chain as is) so each gets a fresh Fiat-Shamir seed.
std::vector<ProofSize> measure_reps(std::shared_ptr<const Chain> chain, const VerifierParams& params,
                                    const SessionOptions& options, std::uint64_t reps,
                                    std::uint64_t base_seed, Kernel kernel);

struct MeanCi {
  double mean = 0;
  double low = 0;
  double high = 0;
};

// Mean with a two-sided 95% Student-t interval.
MeanCi mean_ci95(std::span<const double> values);

struct LinearFit {
  double a = 0;
  double b = 0;
  double r2 = 0;
};

// Least squares y = a + b x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace flyclient
