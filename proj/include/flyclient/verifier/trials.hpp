#pragma once

#include <functional>
#include <memory>

#include "flyclient/mmr/batch.hpp"
#include "flyclient/verifier/session.hpp"

namespace flyclient {

struct TrialStats {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  double rate() const { return trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0; }
};

// Runs trial(base_seed + i) for i < count; kParallel spreads trials over OpenMP
// threads. The result does not depend on the kernel.
TrialStats run_trials(std::uint64_t count, std::uint64_t base_seed, Kernel kernel,
                      const std::function<bool(std::uint64_t)>& trial);

// Independent verifier runs (one sampling seed each) against one prover.
TrialStats verification_trials(std::shared_ptr<const ProverService> prover,
                               const ConsensusParams& consensus, const VerifierParams& params,
                               SessionOptions options, std::uint64_t count, std::uint64_t base_seed,
                               Kernel kernel);

}  // namespace flyclient
