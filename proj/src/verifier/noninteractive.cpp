#include "flyclient/verifier/noninteractive.hpp"

#include "flyclient/core/error.hpp"

namespace flyclient {

NiProof ni_prove(ProverClient& prover, const ConsensusParams& consensus, const VerifierParams& params,
                 const SessionOptions& options, const Hash32& manifest_digest) {
  if (params.mode != ProofMode::kNonInteractive) {
    throw ContractError("non-interactive proofs need non-interactive parameters");
  }
  SessionOptions opts = options;
  opts.measure = false;
  RecordingClient recorder(prover, opts.format, consensus.node_format());
  VerificationSession session(consensus, params, opts);
  const CheckResult result = session.check_prover(recorder);
  if (result.transport_failure) throw TransportError(result.reason);

  NiProof proof;
  proof.format = opts.format;
  proof.node_format = consensus.node_format();
  proof.style = opts.style;
  proof.variant = opts.variant;
  proof.manifest_digest = manifest_digest;
  proof.entries = recorder.entries();
  return proof;
}

CheckResult ni_verify(const NiProof& proof, const ConsensusParams& consensus,
                      const VerifierParams& params) {
  if (params.mode != ProofMode::kNonInteractive) {
    throw ContractError("non-interactive proofs need non-interactive parameters");
  }
  if (proof.node_format != consensus.node_format()) {
    CheckResult r;
    r.reason = "proof node format does not match the chain";
    return r;
  }
  SessionOptions opts;
  opts.format = proof.format;
  opts.style = proof.style;
  opts.variant = proof.variant;
  opts.measure = false;
  BundleClient bundle(proof);
  VerificationSession session(consensus, params, opts);
  return session.check_prover(bundle);
}

}  // namespace flyclient
