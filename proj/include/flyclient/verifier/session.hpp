#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flyclient/chain/chain.hpp"
#include "flyclient/codec/encoding.hpp"
#include "flyclient/codec/ni_file.hpp"
#include "flyclient/params/params.hpp"
#include "flyclient/prover/client.hpp"

namespace flyclient {

struct SessionOptions {
  Variant variant = Variant::kReference;
  ProofStyle style = ProofStyle::kPerSample;
  ProofFormat format = ProofFormat::kNormal;
  // Interactive draws; ignored by the Fiat-Shamir schedule.
  std::uint64_t seed = 0;
  // Record JSON and gzip sizes per item (costly; off for bulk trials).
  bool measure = true;
  int gzip_level = 6;
  // Experiment hooks replacing the computed deterministic/probabilistic counts.
  std::optional<std::uint64_t> n_det_override;
  std::optional<std::uint64_t> n_prob_override;
};

// Throws ContractError or FormatError for option sets that cannot work together.
void validate_options(const ConsensusParams& consensus, const VerifierParams& params,
                      const SessionOptions& options);

struct Draw {
  long double u = 0;
  U256 x = 0;
  std::uint64_t height = 0;
};

struct CheckResult {
  bool accepted = false;
  // Set when the prover could not be reached; `reason` carries the cause.
  bool transport_failure = false;
  std::string reason;

  std::uint64_t block_count = 0;
  U256 total_work = 0;
  std::optional<HeaderView> tip;

  bool full_validation = false;
  long double delta = 0;
  U256 w_det = 0;
  SamplingCounts counts;
  std::vector<std::uint64_t> deterministic_heights;
  std::vector<Draw> draws;
};

// One verifier run against one prover: caches H (headers) and M (nodes),
// plus the transcript of everything downloaded.
class VerificationSession {
 public:
  VerificationSession(ConsensusParams consensus, VerifierParams params, SessionOptions options = {});

  CheckResult check_prover(ProverClient& prover);
  // For callers that already downloaded the prover's chain info.
  CheckResult check_prover(ProverClient& prover, const BlockchainInfo& info);

  const std::vector<TranscriptItem>& transcript() const { return transcript_; }
  std::uint64_t transcript_bytes(Representation representation,
                                 Scope scope = Scope::kPerItem) const;
  std::uint64_t count(ItemKind kind) const;
  const SessionOptions& options() const { return options_; }
  const VerifierParams& params() const { return params_; }
  const ConsensusParams& consensus() const { return consensus_; }

 private:
  struct Rejected;

  void reset();
  void run(ProverClient& prover, const BlockchainInfo& info, CheckResult& result);
  void full_validation(CheckResult& result);
  void deterministic_window(CheckResult& result, std::uint64_t n_det);
  void probabilistic_draws(CheckResult& result, std::uint64_t n_prob);

  void sample_at_height(std::uint64_t h, std::uint64_t tip, const std::optional<U256>& x,
                        const char* role);
  void cumulative_levels(std::uint64_t tip, const std::set<std::uint64_t>& heights);
  void check_mapping(const Draw& draw);

  HeaderView fetch_header(std::uint64_t height, const char* role);
  MmrNode fetch_node(std::size_t branch, std::uint64_t index);
  Hash32 fetch_auth_root(std::uint64_t height);
  U256 fetch_total_work(std::uint64_t height);
  std::uint64_t fetch_height(const U256& x);
  template <typename JsonFn>
  void record(ItemKind kind, const char* role, std::uint32_t branch, std::uint64_t key, Bytes binary,
              JsonFn&& json);

  void check_pow(const HeaderView& header);
  void check_bits(const HeaderView& header);
  void check_transition(const HeaderView& prev, const HeaderView& next);
  void check_commitment(std::uint64_t tip, const Hash32& root);
  void check_frontier(const AncestryCheck& check, std::uint64_t tip);
  // Work of everything before branch `branch` (whose MMR is committed by `tip`).
  U256 branch_base(std::size_t branch, std::uint64_t tip, const U256& root_work);
  void bind_work(std::uint64_t height, const U256& cumulative);
  U256 header_work(const HeaderView& header) const;
  LeafMeta leaf_of(const HeaderView& header) const;
  const HeaderView& bound_header(std::uint64_t height) const;
  bool use_caches() const { return options_.variant != Variant::kCacheLess; }
  bool fixed() const { return options_.variant == Variant::kFixedDifficulty; }

  ConsensusParams consensus_;
  VerifierParams params_;
  SessionOptions options_;
  DifficultySchedule schedule_;
  PowEngine pow_;

  ProverClient* prover_ = nullptr;
  std::uint64_t tip_height_ = 0;
  U256 total_work_ = 0;
  std::map<std::uint64_t, HeaderView> headers_;
  std::map<std::pair<std::size_t, std::uint64_t>, MmrNode> nodes_;
  std::map<std::uint64_t, Hash32> auth_roots_;
  std::map<U256, std::uint64_t> heights_;
  std::map<std::uint64_t, U256> bound_work_;
  std::set<std::uint64_t> bound_;
  // Heights bound to the tip by hash links (the deterministic window).
  std::set<std::uint64_t> chained_;
  std::set<std::uint64_t> window_;
  std::map<std::size_t, U256> branch_base_;
  std::vector<TranscriptItem> transcript_;
};

// Transcript CSV: kind,branch,index_or_height,bytes_json,bytes_binary,bytes_zipped
void write_transcript_csv(std::ostream& out, const std::vector<TranscriptItem>& items);

struct ProverReport {
  std::string name;
  CheckResult result;
};

struct VerifyOutcome {
  // Index into the prover list of the accepted prover.
  std::optional<std::size_t> accepted;
  std::vector<ProverReport> reports;
  std::vector<TranscriptItem> transcript;
  bool any_transport_failure() const;
};

// Queries every prover's chain info, then checks provers in decreasing order
// of declared work and accepts the first that passes.
VerifyOutcome flyclient_verify(const std::vector<ProverClient*>& provers,
                               const ConsensusParams& consensus, const VerifierParams& params,
                               const SessionOptions& options = {});

}  // namespace flyclient
