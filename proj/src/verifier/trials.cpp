#include "flyclient/verifier/trials.hpp"

#include <omp.h>

#include <exception>
#include <vector>

namespace flyclient {

TrialStats run_trials(std::uint64_t count, std::uint64_t base_seed, Kernel kernel,
                      const std::function<bool(std::uint64_t)>& trial) {
  std::vector<std::uint8_t> accepted(count, 0);
  if (kernel == Kernel::kSerial) {
    for (std::uint64_t i = 0; i < count; ++i) accepted[i] = trial(base_seed + i) ? 1 : 0;
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      try {
        accepted[i] = trial(base_seed + static_cast<std::uint64_t>(i)) ? 1 : 0;
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  TrialStats stats;
  stats.trials = count;
  for (std::uint8_t a : accepted) stats.accepted += a;
  return stats;
}

TrialStats verification_trials(std::shared_ptr<const ProverService> prover,
                               const ConsensusParams& consensus, const VerifierParams& params,
                               SessionOptions options, std::uint64_t count, std::uint64_t base_seed,
                               Kernel kernel) {
  options.measure = false;
  validate_options(consensus, params, options);
  return run_trials(count, base_seed, kernel, [&](std::uint64_t seed) {
    SessionOptions o = options;
    o.seed = seed;
    LocalClient client(prover);
    VerificationSession session(consensus, params, o);
    return session.check_prover(client).accepted;
  });
}

}  // namespace flyclient
