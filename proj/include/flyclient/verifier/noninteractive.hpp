#pragma once

#include "flyclient/verifier/session.hpp"

namespace flyclient {

// Runs the verifier against `prover` with the Fiat-Shamir schedule and keeps
// every answer it needed. A rejected chain still yields its (partial) bundle.
NiProof ni_prove(ProverClient& prover, const ConsensusParams& consensus, const VerifierParams& params,
                 const SessionOptions& options, const Hash32& manifest_digest);

// Replays the verifier against the bundle; a missing item rejects.
CheckResult ni_verify(const NiProof& proof, const ConsensusParams& consensus,
                      const VerifierParams& params);

}  // namespace flyclient
