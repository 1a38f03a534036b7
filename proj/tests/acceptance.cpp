// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flyclient/chain/chain.hpp"
#include "flyclient/chain/header.hpp"
#include "flyclient/codec/gas.hpp"
#include "flyclient/core/error.hpp"
#include "flyclient/mmr/mmr.hpp"
#include "flyclient/params/params.hpp"
#include "flyclient/prover/client.hpp"
#include "flyclient/prover/service.hpp"
#include "flyclient/verifier/experiments.hpp"
#include "flyclient/verifier/noninteractive.hpp"
#include "flyclient/verifier/sampling.hpp"
#include "flyclient/verifier/trials.hpp"
#include "support.hpp"

using namespace flyclient;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool near(double got, double want, double tol) { return std::fabs(got - want) <= tol; }

Chain make_chain(std::uint64_t length, std::uint64_t seed, PowKind engine,
                 ScheduleKind schedule = ScheduleKind::kFixed, std::vector<std::uint64_t> upgrades = {}) {
  ChainConfig cfg;
  cfg.length = length;
  cfg.seed = seed;
  cfg.engine = engine;
  cfg.schedule.kind = schedule;
  cfg.upgrades = std::move(upgrades);
  return build_honest_chain(cfg);
}

VerifierParams vparams(double c, std::uint64_t L, double lambda, ProofMode mode) {
  VerifierParams p;
  p.c = c;
  p.L = L;
  p.lambda = lambda;
  p.mode = mode;
  return p;
}

std::vector<double> field(const std::vector<ProofSize>& reps, std::uint64_t ProofSize::*member) {
  std::vector<double> out;
  for (const ProofSize& r : reps) out.push_back(static_cast<double>(r.*member));
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0 : s / static_cast<double>(v.size());
}

Outcome check_sampling_counts() {
  const double n = 3e6;
  const SamplingCounts i = interactive_counts(0.5, 100, 50, n, 100 / n);
  const SamplingCounts ni = noninteractive_counts(0.5, 100, 50, n, 100 / n);
  return {i.total() == 598 && ni.total() == 802,
          fmt("interactive %llu (n_prob %.4f), non-interactive %llu (n_prob %.4f)",
              static_cast<unsigned long long>(i.total()), i.n_prob_exact,
              static_cast<unsigned long long>(ni.total()), ni.n_prob_exact)};
}

Outcome check_optimizer() {
  const Optimum a = optimal_c_interactive(50, 3e6, 50);
  const Optimum b = optimal_c_noninteractive(50, 3e6, 50);
  const double base_i = 598.0 * 1487, base_ni = 802.0 * 1487;
  const double save_i = 100 * (1 - a.counts.total() * 1487.0 / base_i);
  const double save_ni = 100 * (1 - b.counts.total() * 1487.0 / base_ni);
  const bool ok = near(a.c, 0.25, 0.01) && near(static_cast<double>(a.counts.total()), 423, 1) &&
                  near(b.c, 0.2161, 0.005) && near(static_cast<double>(b.counts.total()), 504, 1) &&
                  save_i >= 28 && save_ni >= 36;
  return {ok, fmt("interactive c*=%.4f L*=%llu total=%llu saving %.2f%%; non-interactive c*=%.5f L*=%llu "
                  "total=%llu saving %.2f%%",
                  a.c, static_cast<unsigned long long>(a.L), static_cast<unsigned long long>(a.counts.total()),
                  save_i, b.c, static_cast<unsigned long long>(b.L),
                  static_cast<unsigned long long>(b.counts.total()), save_ni)};
}

Outcome check_budget() {
  AdversaryBudget b;
  b.c51_per_hour = 20000;
  b.w_a = 45000;
  b.d_tilde = 900;
  b.honest_blocks_per_hour = 48;
  const double v = expected_budget(b);
  return {near(v, 20833.33, 0.5), fmt("%.2f USD", v)};
}

Outcome check_eleven_leaf_mmr() {
  const auto as_set = [](const std::vector<std::uint64_t>& v) { return std::set<std::uint64_t>(v.begin(), v.end()); };
  const bool sets = as_set(ancestry_proof_indices(11, 3)) == std::set<std::uint64_t>{2, 3, 13, 17, 18} &&
                    as_set(ancestry_proof_indices(11, 6)) == std::set<std::uint64_t>{6, 9, 11, 17, 18} &&
                    as_set(cumulative_proof_indices(11, {3, 6})) == std::set<std::uint64_t>{2, 3, 9, 11, 17, 18};
  const std::vector<LeafMeta> leaves = flytest::random_leaves(11, 9);
  Mmr mmr;
  for (const LeafMeta& m : leaves) mmr.append_leaf(m);
  const AncestryProof proof = mmr.cumulative_proof({3, 6});
  const AncestryCheck check = verify_ancestry(mmr.root(), {{3, leaves[3]}, {6, leaves[6]}}, proof, 11, {});
  const bool rebuilt = check.ok() && check.reconstructed.count(6) && check.reconstructed.count(13) &&
                       check.reconstructed.at(6) == mmr.node(6) && check.reconstructed.at(13) == mmr.node(13) &&
                       check.root.commitment == mmr.root();
  return {sets && rebuilt, fmt("index sets %s, reconstruction of nodes 6 and 13 %s", sets ? "match" : "differ",
                               rebuilt ? "matches the root" : "failed")};
}

Outcome check_encoding_sizes() {
  const Chain zec = make_chain(600, 1, PowKind::kEquihashStub, ScheduleKind::kFixed, {300});
  const Chain eth = make_chain(600, 1, PowKind::kEthashStub);
  const std::size_t zh = serialize_header(zec.header(10)).size();
  const std::size_t eh = serialize_header(eth.header(10)).size();
  const std::size_t dh = serialize_distilled(distill(eth.header(10))).size();
  std::size_t dn_min = SIZE_MAX, dn_max = 0, zn_min = SIZE_MAX, zn_max = 0;
  for (const MmrNode& n : eth.branches[0].mmr.nodes()) {
    const std::size_t s = serialize_node(n, NodeFormat::kDistilled).size();
    dn_min = std::min(dn_min, s);
    dn_max = std::max(dn_max, s);
  }
  for (const ChainBranch& b : zec.branches) {
    for (const MmrNode& n : b.mmr.nodes()) {
      const std::size_t s = serialize_node(n, NodeFormat::kZcash).size();
      zn_min = std::min(zn_min, s);
      zn_max = std::max(zn_max, s);
    }
  }
  const bool ok = zh == 1487 && eh == 175 && dh == 104 && dn_min == 140 && dn_max == 140 && zn_min >= 212 &&
                  zn_max <= 244;
  return {ok, fmt("zcash header %zu, ethash header %zu, distilled header %zu, distilled node %zu, "
                  "zcash nodes %zu..%zu",
                  zh, eh, dh, dn_max, zn_min, zn_max)};
}

Outcome check_gas() {
  const GasEstimate a = gas_estimate(static_cast<std::uint64_t>(1.2 * 1024 * 1024));
  const GasEstimate b = gas_estimate(320 * 1024);
  const auto rel = [](double got, double want) { return std::fabs(got - want) / want <= 0.005; };
  const bool ok = rel(static_cast<double>(a.gas), 50.34e6) && rel(a.cost_usd, 13.21) &&
                  rel(static_cast<double>(b.gas), 13.11e6) && rel(b.cost_usd, 3.44);
  return {ok, fmt("1.2 MiB: %llu gas %.2f USD; 320 KiB: %llu gas %.2f USD", static_cast<unsigned long long>(a.gas),
                  a.cost_usd, static_cast<unsigned long long>(b.gas), b.cost_usd)};
}

Outcome check_completeness() {
  std::mt19937_64 rng(2026);
  const VerifierParams pi = vparams(0.5, 100, 50, ProofMode::kInteractive);
  const VerifierParams pn = vparams(0.5, 100, 50, ProofMode::kNonInteractive);
  int chains = 0, runs = 0, failures = 0;
  std::uint64_t shortest = UINT64_MAX, longest = 0;
  std::string first_failure;
  for (int i = 0; i < 100; ++i) {
    const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const auto n = static_cast<std::uint64_t>(std::llround(std::pow(10.0, 3 + 2 * u)));
    const auto engine = static_cast<PowKind>(i % 3);
    const std::uint64_t pick = rng() % 10;
    const ScheduleKind schedule = pick < 6 ? ScheduleKind::kFixed : pick < 8 ? ScheduleKind::kLinear : ScheduleKind::kRandomWalk;
    std::set<std::uint64_t> ups;
    for (std::uint64_t k = rng() % 4; k > 0; --k) ups.insert(1 + rng() % (n - 1));
    auto chain = std::make_shared<const Chain>(
        make_chain(n, rng(), engine, schedule, std::vector<std::uint64_t>(ups.begin(), ups.end())));
    const auto prover = make_local_prover(chain);
    shortest = std::min(shortest, n);
    longest = std::max(longest, n);
    ++chains;

    std::vector<std::pair<VerifierParams, SessionOptions>> plans;
    SessionOptions o;
    o.measure = false;
    o.seed = rng();
    plans.push_back({pi, o});
    o.style = ProofStyle::kCumulative;
    plans.push_back({pi, o});
    plans.push_back({pn, o});
    if (engine == PowKind::kEthashStub) {
      o.format = ProofFormat::kDistilled;
      plans.push_back({pn, o});
    }
    for (const auto& [p, opt] : plans) {
      CheckResult r;
      LocalClient client(prover);
      if (p.mode == ProofMode::kNonInteractive) {
        r = ni_verify(ni_prove(client, chain->consensus, p, opt, Hash32{}), chain->consensus, p);
      } else {
        VerificationSession session(chain->consensus, p, opt);
        r = session.check_prover(client);
      }
      ++runs;
      if (!r.accepted) {
        ++failures;
        if (first_failure.empty()) first_failure = fmt(" (first: n=%llu %s: %s)", static_cast<unsigned long long>(n),
                                                      to_string(engine), r.reason.c_str());
      }
    }
  }
  return {failures == 0 && chains >= 100,
          fmt("%d chains of %llu..%llu blocks, %d verifier runs, %d rejections%s", chains,
              static_cast<unsigned long long>(shortest), static_cast<unsigned long long>(longest), runs, failures,
              first_failure.c_str())};
}

Chain fork_with(const Chain& honest, std::uint64_t valid_blocks, double ratio, std::uint64_t seed) {
  const auto length = static_cast<std::uint64_t>(std::ceil(static_cast<double>(valid_blocks) / ratio));
  ForkSpec spec;
  spec.fork_height = honest.tip_height() - (length - 5);
  spec.work_budget = work_from_bits(honest.header(spec.fork_height).bits) * valid_blocks;
  spec.validity_ratio = ratio;
  spec.seed = seed;
  return build_adversarial_fork(honest, spec);
}

Outcome check_soundness() {
  const std::uint64_t n = 10000, trials = 10000;
  const double lambda = 10, n_a = 50;
  const Chain honest = make_chain(n, 11, PowKind::kMockSha);
  const Optimum opt = optimal_c_interactive(n_a, static_cast<double>(n), lambda);
  const VerifierParams p = vparams(opt.c, opt.L, lambda, ProofMode::kInteractive);
  const double p0 = std::ldexp(1.0, -10);
  const double bound = p0 + 3 * std::sqrt(p0 * (1 - p0) / static_cast<double>(trials));

  // Budget fork: n_a valid blocks at ratio c. Boundary fork: enough valid
  // blocks to cover the deterministic window (anchor, L headers, tip), still
  // at ratio c, so only the probabilistic samples can catch it.
  std::string detail = fmt("c=%.4f L=%llu; bound %.6f;", opt.c, static_cast<unsigned long long>(opt.L), bound);
  bool ok = true;
  const std::vector<std::pair<const char*, std::uint64_t>> cases = {{"budget fork", static_cast<std::uint64_t>(n_a)},
                                                                     {"window-filling fork", opt.L + 2}};
  for (const auto& [what, valid] : cases) {
    const auto fork = make_local_prover(std::make_shared<const Chain>(fork_with(honest, valid, opt.c, 5)));
    ok &= fork->chain().total_work(fork->chain().tip_height()) > honest.total_work(honest.tip_height());
    if (valid > opt.L) {
      SessionOptions window_only;
      window_only.n_prob_override = 0;
      LocalClient client(fork);
      VerificationSession session(fork->consensus(), p, window_only);
      const bool passes_window = session.check_prover(client).accepted;
      ok &= passes_window;
      detail += fmt(" %s passes the window alone: %s;", what, passes_window ? "yes" : "no");
    }
    for (ProofStyle style : {ProofStyle::kPerSample, ProofStyle::kCumulative}) {
      SessionOptions o;
      o.style = style;
      const TrialStats s = verification_trials(fork, fork->consensus(), p, o, trials, 1'000'000, Kernel::kParallel);
      ok &= s.rate() <= bound;
      detail += fmt(" %s (%llu valid of %llu, %s) %llu/%llu accepted;", what,
                    static_cast<unsigned long long>(fork->chain().fork->valid_blocks),
                    static_cast<unsigned long long>(fork->chain().fork->valid_blocks + fork->chain().fork->invalid_blocks),
                    to_string(style), static_cast<unsigned long long>(s.accepted),
                    static_cast<unsigned long long>(s.trials));
    }
  }
  detail.pop_back();
  return {ok, detail};
}

Outcome check_optimization_ordering() {
  const std::uint64_t n = 100000, reps = 30;
  const auto zec = std::make_shared<const Chain>(make_chain(n, 1, PowKind::kEquihashStub));
  const auto eth = std::make_shared<const Chain>(make_chain(n, 1, PowKind::kEthashStub));
  const VerifierParams pi = vparams(0.5, 100, 50, ProofMode::kInteractive);
  const VerifierParams pn = vparams(0.5, 100, 50, ProofMode::kNonInteractive);

  SessionOptions o;
  const auto per = measure_reps(zec, pi, o, reps, 500, Kernel::kParallel);
  o.style = ProofStyle::kCumulative;
  const auto cum = measure_reps(zec, pi, o, reps, 500, Kernel::kParallel);
  o.style = ProofStyle::kPerSample;
  o.variant = Variant::kCacheLess;
  const auto less = measure_reps(zec, pi, o, reps, 500, Kernel::kParallel);
  o = {};
  o.style = ProofStyle::kCumulative;
  const auto ni_normal = measure_reps(zec, pn, o, reps, 500, Kernel::kParallel);
  o.format = ProofFormat::kDistilled;
  const auto ni_distilled = measure_reps(eth, pn, o, reps, 500, Kernel::kParallel);

  bool all_accepted = true, cum_le = true, cum_strict = false, less_ge = true, whole_le = true;
  double worst_ratio = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    for (const auto* set : {&per, &cum, &less, &ni_normal, &ni_distilled}) all_accepted &= (*set)[r].accepted;
    cum_le &= cum[r].binary <= per[r].binary;
    cum_strict |= cum[r].binary < per[r].binary;
    less_ge &= less[r].binary >= per[r].binary && less[r].json >= per[r].json && less[r].zipped >= per[r].zipped;
    // Interactive: zipped_alt is whole-transcript gzip; non-interactive: zipped is whole-bundle gzip.
    for (const auto* set : {&per, &cum, &less}) whole_le &= (*set)[r].zipped_alt <= (*set)[r].zipped;
    for (const auto* set : {&ni_normal, &ni_distilled}) whole_le &= (*set)[r].zipped <= (*set)[r].zipped_alt;
    worst_ratio = std::max(worst_ratio, static_cast<double>(ni_distilled[r].zipped) / ni_normal[r].zipped);
  }
  const double ratio = mean_of(field(ni_distilled, &ProofSize::zipped)) / mean_of(field(ni_normal, &ProofSize::zipped));
  const double ratio_bin = mean_of(field(ni_distilled, &ProofSize::binary)) / mean_of(field(ni_normal, &ProofSize::binary));
  const bool ok = all_accepted && cum_le && cum_strict && less_ge && whole_le && ratio <= 0.35;
  return {ok, fmt("n=%llu, %llu reps; binary means per-sample %.0f, cumulative %.0f, cache-less %.0f "
                  "(cumulative<=per-sample %s, strict on some rep %s, cache-less>=reference %s); "
                  "NI zipped distilled/normal %.4f (worst rep %.4f, binary %.4f); whole<=piecewise gzip %s",
                  static_cast<unsigned long long>(n), static_cast<unsigned long long>(reps),
                  mean_of(field(per, &ProofSize::binary)), mean_of(field(cum, &ProofSize::binary)),
                  mean_of(field(less, &ProofSize::binary)), cum_le ? "yes" : "no", cum_strict ? "yes" : "no",
                  less_ge ? "yes" : "no", ratio, worst_ratio, ratio_bin, whole_le ? "yes" : "no")};
}

Outcome check_log_growth() {
  const std::vector<std::uint64_t> sizes = {10000, 30000, 100000};
  const VerifierParams p = vparams(0.5, 100, 50, ProofMode::kInteractive);
  std::vector<double> x, y;
  std::string detail;
  for (std::uint64_t n : sizes) {
    const auto chain = std::make_shared<const Chain>(make_chain(n, 3, PowKind::kEquihashStub));
    SessionOptions o;
    o.measure = false;
    const auto reps = measure_reps(chain, p, o, 30, 77, Kernel::kParallel);
    const std::vector<double> bytes = field(reps, &ProofSize::binary);
    const MeanCi ci = mean_ci95(bytes);
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(ci.mean);
    detail += fmt("n=%llu mean %.0f [%.0f, %.0f]; ", static_cast<unsigned long long>(n), ci.mean, ci.low, ci.high);
  }
  const LinearFit f = fit_line(x, y);
  detail += fmt("fit a=%.0f b=%.0f R^2=%.4f", f.a, f.b, f.r2);
  return {f.r2 >= 0.95 && f.b > 0, detail};
}

Outcome check_sampling_distribution() {
  const long double delta = 1e-3L;
  const U256 w = U256(1) << 200;
  const long double wl = u256_to_ld(w);
  std::mt19937_64 rng(4242);
  const std::size_t n = 1'000'000;
  std::vector<long double> v(n);
  for (auto& s : v) s = u256_to_ld(sample_work(w, delta, std::ldexp(static_cast<long double>(rng()), -64))) / wl;
  std::sort(v.begin(), v.end());
  long double d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double F = std::log1p(-v[i]) / std::log(delta);
    d = std::max({d, (i + 1.0L) / n - F, F - static_cast<long double>(i) / n});
  }
  return {d < 0.005L, fmt("KS D=%.6f over %zu draws (delta %.3Lg)", static_cast<double>(d), n, delta)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sampling-counts", check_sampling_counts},
      {"optimizer", check_optimizer},
      {"budget", check_budget},
      {"mmr-eleven-leaves", check_eleven_leaf_mmr},
      {"encoding-sizes", check_encoding_sizes},
      {"gas-model", check_gas},
      {"completeness", check_completeness},
      {"soundness", check_soundness},
      {"optimization-ordering", check_optimization_ordering},
      {"log-growth", check_log_growth},
      {"sampling-distribution", check_sampling_distribution},
  };
  int failed = 0, ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && only != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << fmt(" [%.1fs]", secs) << std::endl;
    failed += o.pass ? 0 : 1;
    ++ran;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << ran - failed << "/" << ran << std::endl;
  return failed || ran == 0 ? 1 : 0;
}
