#include "flyclient/verifier/session.hpp"

#include <algorithm>
#include <ostream>

#include "flyclient/core/error.hpp"
#include "flyclient/mmr/batch.hpp"
#include "flyclient/verifier/sampling.hpp"

namespace flyclient {

using nlohmann::json;

struct VerificationSession::Rejected : public Error {
  using Error::Error;
};

namespace {

std::string at_height(std::uint64_t h) { return " at height " + std::to_string(h); }

BlockStamp stamp_of(const HeaderView& v) { return {view_height(v), view_time(v), view_bits(v)}; }

}  // namespace

void validate_options(const ConsensusParams& consensus, const VerifierParams& params,
                      const SessionOptions& options) {
  if (options.variant == Variant::kCacheLess) {
    if (params.mode == ProofMode::kNonInteractive) {
      throw ContractError("the cache-less variant is interactive only");
    }
    if (options.style == ProofStyle::kCumulative) {
      throw ContractError("the cache-less variant downloads one proof per sample");
    }
  }
  if (options.format == ProofFormat::kDistilled) {
    if (consensus.engine != PowKind::kEthashStub) {
      throw FormatError(std::string("distilled proofs need an ethash-stub chain, not ") +
                        to_string(consensus.engine));
    }
    if (options.style != ProofStyle::kCumulative) {
      throw ContractError("distilled proofs are cumulative");
    }
  }
  if (options.variant == Variant::kFixedDifficulty && consensus.schedule.kind != ScheduleKind::kFixed) {
    throw ContractError("the fixed-difficulty variant needs a fixed difficulty schedule");
  }
  if (!(params.c > 0.0 && params.c < 1.0)) throw DomainError("c must lie in (0, 1)");
}

VerificationSession::VerificationSession(ConsensusParams consensus, VerifierParams params,
                                         SessionOptions options)
    : consensus_(std::move(consensus)),
      params_(params),
      options_(options),
      schedule_(consensus_.schedule),
      pow_(consensus_.pow()) {
  validate_options(consensus_, params_, options_);
}

void VerificationSession::reset() {
  headers_.clear();
  nodes_.clear();
  auth_roots_.clear();
  heights_.clear();
  bound_work_.clear();
  bound_.clear();
  chained_.clear();
  window_.clear();
  branch_base_.clear();
  transcript_.clear();
}

CheckResult VerificationSession::check_prover(ProverClient& prover) {
  reset();
  CheckResult result;
  BlockchainInfo info;
  try {
    info = prover.get_blockchain_info(options_.format);
  } catch (const TransportError& e) {
    result.transport_failure = true;
    result.reason = e.what();
    return result;
  } catch (const ServiceUnavailableError& e) {
    result.transport_failure = true;
    result.reason = e.what();
    return result;
  } catch (const Error& e) {
    result.reason = std::string("chain info: ") + e.what();
    return result;
  }
  run(prover, info, result);
  return result;
}

CheckResult VerificationSession::check_prover(ProverClient& prover, const BlockchainInfo& info) {
  reset();
  CheckResult result;
  run(prover, info, result);
  return result;
}

template <typename JsonFn>
void VerificationSession::record(ItemKind kind, const char* role, std::uint32_t branch,
                                 std::uint64_t key, Bytes binary, JsonFn&& json_fn) {
  if (options_.measure) {
    transcript_.push_back(make_item(kind, role, branch, key, std::move(binary), json_fn(),
                                    options_.gzip_level));
    return;
  }
  TranscriptItem item;
  item.kind = kind;
  item.role = role;
  item.branch = branch;
  item.key = key;
  item.binary_bytes = binary.size();
  item.binary = std::move(binary);
  transcript_.push_back(std::move(item));
}

std::uint64_t VerificationSession::transcript_bytes(Representation representation, Scope scope) const {
  Encoding enc;
  enc.representation = representation;
  enc.scope = scope;
  enc.format = options_.format;
  enc.gzip_level = options_.gzip_level;
  return measure_transcript(transcript_, enc);
}

std::uint64_t VerificationSession::count(ItemKind kind) const {
  return static_cast<std::uint64_t>(std::count_if(
      transcript_.begin(), transcript_.end(), [&](const TranscriptItem& i) { return i.kind == kind; }));
}

void VerificationSession::run(ProverClient& prover, const BlockchainInfo& info, CheckResult& result) {
  prover_ = &prover;
  result.block_count = info.block_count;
  result.total_work = info.total_work;
  result.tip = info.tip;
  try {
    record(ItemKind::kInfo, "info", 0, 0, info_to_bytes(info), [&] { return info_to_json(info); });
    if (info.block_count == 0) throw Rejected("prover declares an empty chain");
    tip_height_ = info.block_count - 1;
    total_work_ = info.total_work;
    if (view_height(info.tip) != tip_height_) throw Rejected("tip height disagrees with block count");
    headers_[tip_height_] = info.tip;
    bound_.insert(tip_height_);
    chained_.insert(tip_height_);
    bind_work(tip_height_, total_work_);
    check_pow(info.tip);
    check_bits(info.tip);

    const std::uint64_t n_det = options_.n_det_override.value_or(params_.L);
    if (fixed()) {
      const U256 expected = U256(info.block_count) * header_work(info.tip);
      if (total_work_ != expected) throw Rejected("declared work is not n times the fixed block work");
    }
    if (tip_height_ == 0) {
      if (total_work_ != header_work(info.tip)) throw Rejected("genesis-only chain declares extra work");
      result.accepted = true;
      return;
    }
    if (n_det >= tip_height_) {
      full_validation(result);
      result.accepted = true;
      return;
    }
    deterministic_window(result, n_det);

    const long double n = static_cast<long double>(info.block_count);
    if (fixed()) {
      result.delta = static_cast<long double>(n_det) / n;
    } else {
      result.delta = 1.0L - u256_to_ld(result.w_det) / u256_to_ld(total_work_);
    }
    try {
      result.counts = sampling_counts(params_.mode, params_.c, n_det, params_.lambda,
                                      static_cast<double>(n), static_cast<double>(result.delta));
    } catch (const DomainError&) {
      // The suffix holds at least a c fraction of the work, so sampling cannot
      // reach the security level; fall back to checking every header.
      full_validation(result);
      result.accepted = true;
      return;
    }
    probabilistic_draws(result, options_.n_prob_override.value_or(result.counts.n_prob));
    result.accepted = true;
  } catch (const Rejected& e) {
    result.reason = e.what();
  } catch (const TransportError& e) {
    result.transport_failure = true;
    result.reason = e.what();
  } catch (const ServiceUnavailableError& e) {
    result.transport_failure = true;
    result.reason = e.what();
  } catch (const NotFoundError& e) {
    result.reason = std::string("prover cannot serve a required item: ") + e.what();
  } catch (const Error& e) {
    result.reason = std::string("malformed prover data: ") + e.what();
  }
  prover_ = nullptr;
}

void VerificationSession::full_validation(CheckResult& result) {
  result.full_validation = true;
  const std::uint64_t T = tip_height_;
  for (std::uint64_t h = 0; h < T; ++h) {
    const HeaderView v = fetch_header(h, "full");
    check_pow(v);
    check_bits(v);
  }
  U256 sum = 0;
  for (std::uint64_t h = 0; h <= T; ++h) {
    if (h > 0) check_transition(headers_.at(h - 1), headers_.at(h));
    sum += header_work(headers_.at(h));
  }
  if (sum != total_work_) throw Rejected("declared total work differs from the sum over all headers");
  // Recompute every committed MMR; this binds the headers even without hash links.
  std::uint64_t t = T;
  while (t > 0) {
    const std::size_t c = consensus_.committed_branch(t);
    const std::uint64_t s = consensus_.branch_start(c);
    std::vector<LeafMeta> leaves;
    for (std::uint64_t h = s; h < t; ++h) leaves.push_back(leaf_of(headers_.at(h)));
    const Mmr mmr = build_mmr(leaves, consensus_.node_context(c), s, Kernel::kSerial);
    check_commitment(t, mmr.root());
    t = s;
  }
}

void VerificationSession::deterministic_window(CheckResult& result, std::uint64_t n_det) {
  const std::uint64_t T = tip_height_;
  const std::uint64_t a = T - n_det - 1;
  for (std::uint64_t h = a; h < T; ++h) {
    const HeaderView v = fetch_header(h, h == a ? "anchor" : "window");
    check_pow(v);
    check_bits(v);
  }
  for (std::uint64_t h = a; h <= T; ++h) {
    result.deterministic_heights.push_back(h);
    window_.insert(h);
  }
  U256 suffix = 0;
  for (std::uint64_t h = a + 1; h <= T; ++h) {
    check_transition(headers_.at(h - 1), headers_.at(h));
    suffix += header_work(headers_.at(h));
  }
  if (options_.format == ProofFormat::kNormal) {
    for (std::uint64_t h = a; h < T; ++h) {
      chained_.insert(h);
      bound_.insert(h);
    }
  }
  if (fixed()) {
    result.w_det = U256(a + 1) * header_work(headers_.at(T));
  } else {
    result.w_det = fetch_total_work(a);
  }
  if (result.w_det + suffix != total_work_) {
    throw Rejected("work before the window plus the window's work differs from the declared total");
  }
  U256 w = total_work_;
  for (std::uint64_t h = T; h > a; --h) {
    w -= header_work(headers_.at(h));
    bind_work(h - 1, w);
  }
}

void VerificationSession::probabilistic_draws(CheckResult& result, std::uint64_t n_prob) {
  DrawSource source = params_.mode == ProofMode::kNonInteractive
                          ? DrawSource::fiat_shamir(fiat_shamir_seed(view_bytes(headers_.at(tip_height_))))
                          : DrawSource::interactive(options_.seed);
  std::set<std::uint64_t> heights;
  for (std::uint64_t i = 0; i < n_prob; ++i) {
    Draw d;
    d.u = source.next();
    if (fixed()) {
      d.height = sample_height_fixed(result.block_count, result.delta, d.u);
      d.x = sample_work(U256(result.block_count), result.delta, d.u);
    } else {
      d.x = sample_work(total_work_, result.delta, d.u);
      d.height = fetch_height(d.x);
      if (d.height >= tip_height_) {
        throw Rejected("work " + u256_hex(d.x) + " mapped to height " + std::to_string(d.height) +
                       ", not below the tip");
      }
    }
    result.draws.push_back(d);
    if (options_.style == ProofStyle::kPerSample) {
      sample_at_height(d.height, tip_height_, fixed() ? std::nullopt : std::optional<U256>(d.x),
                       "sample");
    } else {
      heights.insert(d.height);
    }
  }
  if (options_.style == ProofStyle::kCumulative) {
    if (options_.format == ProofFormat::kDistilled) {
      for (std::uint64_t h : result.deterministic_heights) {
        if (h < tip_height_) heights.insert(h);
      }
    }
    cumulative_levels(tip_height_, heights);
    if (!fixed()) {
      for (const Draw& d : result.draws) check_mapping(d);
    }
  }
}

void VerificationSession::check_mapping(const Draw& d) {
  auto it = bound_work_.find(d.height);
  if (it == bound_work_.end() || !bound_.count(d.height)) {
    throw Rejected("sampled header" + at_height(d.height) + " was never bound");
  }
  const U256& w_h = it->second;
  const U256 w_prev = w_h - header_work(headers_.at(d.height));
  const bool above_prev = d.height == 0 || d.x > w_prev;
  if (!above_prev || d.x > w_h) {
    throw Rejected("work " + u256_hex(d.x) + " does not fall in the block" + at_height(d.height));
  }
}

void VerificationSession::sample_at_height(std::uint64_t h, std::uint64_t t,
                                           const std::optional<U256>& x, const char* role) {
  if (h >= t) throw Rejected("sample" + at_height(h) + " is not below its local tip");
  if (bound_.count(h) && (use_caches() || chained_.count(h))) {
    if (!use_caches()) {
      const HeaderView again = fetch_header(h, role);
      if (view_hash(again) != view_hash(headers_.at(h))) {
        throw Rejected("header" + at_height(h) + " changed between downloads");
      }
    }
    if (x) check_mapping({0, *x, h});
    return;
  }
  const std::size_t c = consensus_.committed_branch(t);
  const std::uint64_t s = consensus_.branch_start(c);
  if (h < s) {
    sample_at_height(s, t, std::nullopt, "boundary");
    sample_at_height(h, s, x, role);
    return;
  }
  const HeaderView header = fetch_header(h, role);
  check_pow(header);
  check_bits(header);
  const NodeContext ctx = consensus_.node_context(c);
  const std::uint64_t leaf = h - s;
  const std::uint64_t leaf_count = t - s;
  std::map<std::uint64_t, MmrNode> proof;
  for (std::uint64_t idx : ancestry_proof_indices(leaf_count, leaf)) proof.emplace(idx, fetch_node(c, idx));
  const std::map<std::uint64_t, MmrNode> leaves = {{leaf, make_leaf(leaf_of(header), ctx)}};
  const AncestryCheck check = reconstruct_root(leaf_count, leaves, proof, ctx, s);
  if (!check.ok()) {
    throw Rejected(std::string(check.status == ProofStatus::kStructural ? "malformed" : "inconsistent") +
                   " ancestry proof for height " + std::to_string(h) + ": " + check.detail);
  }
  check_commitment(t, check.root.commitment);
  check_frontier(check, t);
  const U256 base = branch_base(c, t, check.root.work);
  bind_work(h, base + check.work_before(leaf) + header_work(header));
  bound_.insert(h);
  if (x) check_mapping({0, *x, h});
}

void VerificationSession::cumulative_levels(std::uint64_t t, const std::set<std::uint64_t>& heights) {
  const std::size_t c = consensus_.committed_branch(t);
  const std::uint64_t s = consensus_.branch_start(c);
  const std::uint64_t leaf_count = t - s;
  std::set<std::uint64_t> below;
  std::set<std::uint64_t> targets;
  for (std::uint64_t h : heights) {
    if (h >= t) throw Rejected("sample" + at_height(h) + " is not below its local tip");
    if (h < s) {
      below.insert(h);
    } else if (!bound_.count(h)) {
      targets.insert(h);
    }
  }
  if (!below.empty() && !bound_.count(s)) targets.insert(s);

  if (!targets.empty()) {
    const NodeContext ctx = consensus_.node_context(c);
    std::vector<std::uint64_t> target_leaves;
    for (std::uint64_t h : targets) {
      const char* role = window_.count(h) ? "window" : heights.count(h) ? "sample" : "boundary";
      const HeaderView v = fetch_header(h, role);
      check_pow(v);
      check_bits(v);
      target_leaves.push_back(h - s);
    }
    std::vector<std::uint64_t> known_leaves;
    for (auto it = bound_.lower_bound(s); it != bound_.end() && *it < t; ++it) {
      if (headers_.count(*it)) known_leaves.push_back(*it - s);
    }
    std::map<std::uint64_t, MmrNode> proof;
    for (std::uint64_t idx : cumulative_proof_indices(leaf_count, target_leaves, known_leaves)) {
      proof.emplace(idx, fetch_node(c, idx));
    }
    std::map<std::uint64_t, MmrNode> leaves;
    for (std::uint64_t leaf : target_leaves) leaves.emplace(leaf, make_leaf(leaf_of(headers_.at(s + leaf)), ctx));
    for (std::uint64_t leaf : known_leaves) {
      const bool covered = std::any_of(proof.begin(), proof.end(), [&](const auto& p) {
        const LeafInterval iv = position_interval(p.first);
        return iv.first <= leaf && leaf <= iv.last;
      });
      if (!covered) leaves.emplace(leaf, make_leaf(leaf_of(headers_.at(s + leaf)), ctx));
    }
    const AncestryCheck check = reconstruct_root(leaf_count, leaves, proof, ctx, s);
    if (!check.ok()) {
      throw Rejected(std::string(check.status == ProofStatus::kStructural ? "malformed" : "inconsistent") +
                     " cumulative proof for branch " + std::to_string(c) + ": " + check.detail);
    }
    check_commitment(t, check.root.commitment);
    check_frontier(check, t);
    const U256 base = branch_base(c, t, check.root.work);
    for (const auto& [leaf, node] : leaves) {
      const std::uint64_t h = s + leaf;
      bind_work(h, base + check.work_before(leaf) + node.work);
      bound_.insert(h);
    }
  }
  if (!below.empty()) cumulative_levels(s, below);
}

HeaderView VerificationSession::fetch_header(std::uint64_t height, const char* role) {
  if (use_caches()) {
    auto it = headers_.find(height);
    if (it != headers_.end()) return it->second;
  }
  HeaderView v = prover_->get_block_header(height, options_.format);
  if (view_height(v) != height) throw Rejected("prover returned the wrong header" + at_height(height));
  record(ItemKind::kHeader, role, 0, height, view_bytes(v), [&] { return view_to_json(v); });
  headers_[height] = v;
  return v;
}

MmrNode VerificationSession::fetch_node(std::size_t branch, std::uint64_t index) {
  const auto key = std::make_pair(branch, index);
  if (use_caches()) {
    auto it = nodes_.find(key);
    if (it != nodes_.end()) return it->second;
  }
  const std::uint32_t branch_id = consensus_.branch_ids.at(branch);
  MmrNode node = prover_->get_history_node(branch_id, index);
  const NodeFormat format = consensus_.node_format();
  if (format == NodeFormat::kDistilled && node.branch_id != branch_id) {
    throw Rejected("node " + std::to_string(index) + " carries the wrong branch id");
  }
  record(ItemKind::kNode, "proof", branch_id, index, serialize_node(node, format),
         [&] { return node_to_json(node, format); });
  nodes_[key] = node;
  return node;
}

Hash32 VerificationSession::fetch_auth_root(std::uint64_t height) {
  if (use_caches()) {
    auto it = auth_roots_.find(height);
    if (it != auth_roots_.end()) return it->second;
  }
  const Hash32 root = prover_->get_auth_data_root(height);
  record(ItemKind::kAuthRoot, "authroot", 0, height, Bytes(root.bytes.begin(), root.bytes.end()),
         [&] { return json(root.hex()); });
  auth_roots_[height] = root;
  return root;
}

U256 VerificationSession::fetch_total_work(std::uint64_t height) {
  const U256 w = prover_->get_total_work(height);
  record(ItemKind::kTotalWork, "totalwork", 0, height, u256_be_bytes(w), [&] { return json(u256_hex(w)); });
  return w;
}

std::uint64_t VerificationSession::fetch_height(const U256& x) {
  if (use_caches()) {
    auto it = heights_.find(x);
    if (it != heights_.end()) return it->second;
  }
  const std::uint64_t h = prover_->get_height_with_total_work(x);
  ByteWriter w(8);
  w.u64le(h);
  record(ItemKind::kHeight, "height", 0, h, w.take(), [&] { return json(h); });
  heights_[x] = h;
  return h;
}

void VerificationSession::check_pow(const HeaderView& header) {
  const bool ok = std::visit([&](const auto& h) { return pow_.verify(h); }, header);
  if (!ok) throw Rejected("invalid proof of work" + at_height(view_height(header)));
}

void VerificationSession::check_bits(const HeaderView& header) {
  const std::uint64_t h = view_height(header);
  const auto expected = schedule_.expected_bits(h);
  if (expected && *expected != view_bits(header)) {
    throw Rejected("difficulty off schedule" + at_height(h));
  }
}

void VerificationSession::check_transition(const HeaderView& prev, const HeaderView& next) {
  const std::uint64_t h = view_height(next);
  if (!validate_transition(schedule_, stamp_of(prev), stamp_of(next))) {
    throw Rejected("invalid difficulty or time transition" + at_height(h));
  }
  const auto* full = std::get_if<Header>(&next);
  if (full && full->prev_hash != view_hash(prev)) {
    throw Rejected("header" + at_height(h) + " is not chained to its predecessor");
  }
}

void VerificationSession::check_commitment(std::uint64_t tip, const Hash32& root) {
  const HeaderView& v = bound_header(tip);
  if (const auto* d = std::get_if<DistilledHeader>(&v)) {
    if (d->chain_history_root != root) throw Rejected("history root mismatch" + at_height(tip));
    return;
  }
  const Header& header = std::get<Header>(v);
  const Hash32 expected =
      consensus_.engine == PowKind::kEthashStub ? root : commit_block(fetch_auth_root(tip), root);
  if (header.block_commitments != expected) throw Rejected("history root mismatch" + at_height(tip));
}

void VerificationSession::check_frontier(const AncestryCheck& check, std::uint64_t tip) {
  std::optional<BlockStamp> prev;
  for (const FrontierEntry& e : check.frontier) {
    const MmrNode& n = e.node;
    const BlockStamp first{n.earliest_height, n.earliest_time, n.earliest_bits};
    const BlockStamp last{n.latest_height, n.latest_time, n.latest_bits};
    for (const BlockStamp& st : {first, last}) {
      const auto expected = schedule_.expected_bits(st.height);
      if (expected && *expected != st.bits) {
        throw Rejected("proof node " + std::to_string(e.position) + " claims off-schedule difficulty" +
                       at_height(st.height));
      }
    }
    if (prev && !validate_transition(schedule_, *prev, first)) {
      throw Rejected("implausible difficulty change between proof nodes" + at_height(first.height));
    }
    prev = last;
  }
  if (prev && !validate_transition(schedule_, *prev, stamp_of(bound_header(tip)))) {
    throw Rejected("implausible difficulty change into local tip" + at_height(tip));
  }
}

U256 VerificationSession::branch_base(std::size_t branch, std::uint64_t tip, const U256& root_work) {
  const std::uint64_t s = consensus_.branch_start(branch);
  if (fixed()) {
    const U256 per_block = header_work(bound_header(tip));
    if (root_work != U256(tip - s) * per_block) {
      throw Rejected("fixed-difficulty branch " + std::to_string(branch) + " has irregular work");
    }
    return U256(s) * per_block;
  }
  auto known = bound_work_.find(tip);
  if (known == bound_work_.end()) throw Rejected("local tip" + at_height(tip) + " has unknown work");
  const U256 tip_work = header_work(bound_header(tip));
  if (known->second < tip_work + root_work) {
    throw Rejected("branch " + std::to_string(branch) + " claims more work than the chain holds");
  }
  const U256 base = known->second - tip_work - root_work;
  if (branch == 0 && base != 0) throw Rejected("work before the first branch must be zero");
  auto [it, inserted] = branch_base_.emplace(branch, base);
  if (!inserted && it->second != base) {
    throw Rejected("branch " + std::to_string(branch) + " work disagrees between proofs");
  }
  return base;
}

void VerificationSession::bind_work(std::uint64_t height, const U256& cumulative) {
  auto [it, inserted] = bound_work_.emplace(height, cumulative);
  if (!inserted && it->second != cumulative) {
    throw Rejected("cumulative work disagrees" + at_height(height));
  }
}

U256 VerificationSession::header_work(const HeaderView& header) const {
  return work_from_bits(view_bits(header));
}

LeafMeta VerificationSession::leaf_of(const HeaderView& header) const {
  return {view_hash(header), view_time(header), view_bits(header), view_height(header)};
}

const HeaderView& VerificationSession::bound_header(std::uint64_t height) const {
  auto it = headers_.find(height);
  if (it == headers_.end()) throw Rejected("header" + at_height(height) + " is not held");
  return it->second;
}

void write_transcript_csv(std::ostream& out, const std::vector<TranscriptItem>& items) {
  out << "kind,branch,index_or_height,bytes_json,bytes_binary,bytes_zipped\n";
  for (const TranscriptItem& i : items) {
    out << to_string(i.kind) << ',' << i.branch << ',' << i.key << ',' << i.json_bytes << ','
        << i.binary_bytes << ',' << i.zipped_bytes << '\n';
  }
}

bool VerifyOutcome::any_transport_failure() const {
  return std::any_of(reports.begin(), reports.end(),
                     [](const ProverReport& r) { return r.result.transport_failure; });
}

VerifyOutcome flyclient_verify(const std::vector<ProverClient*>& provers,
                               const ConsensusParams& consensus, const VerifierParams& params,
                               const SessionOptions& options) {
  validate_options(consensus, params, options);
  VerifyOutcome outcome;
  struct Candidate {
    std::size_t index;
    BlockchainInfo info;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < provers.size(); ++i) {
    ProverReport report{provers[i]->name(), {}};
    try {
      candidates.push_back({i, provers[i]->get_blockchain_info(options.format)});
      continue;
    } catch (const TransportError& e) {
      report.result.transport_failure = true;
      report.result.reason = e.what();
    } catch (const ServiceUnavailableError& e) {
      report.result.transport_failure = true;
      report.result.reason = e.what();
    } catch (const Error& e) {
      report.result.reason = std::string("chain info: ") + e.what();
    }
    outcome.reports.push_back(std::move(report));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.info.total_work > b.info.total_work;
  });
  for (const Candidate& cand : candidates) {
    VerificationSession session(consensus, params, options);
    CheckResult result = session.check_prover(*provers[cand.index], cand.info);
    const bool accepted = result.accepted;
    outcome.reports.push_back({provers[cand.index]->name(), std::move(result)});
    if (accepted) {
      outcome.accepted = cand.index;
      outcome.transcript = session.transcript();
      break;
    }
  }
  return outcome;
}

}  // namespace flyclient
