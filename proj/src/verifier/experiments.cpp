#include "flyclient/verifier/experiments.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <exception>

#include "flyclient/core/error.hpp"

namespace flyclient {

ProofSize measure_proof(std::shared_ptr<const ProverService> prover, const ConsensusParams& consensus,
                        const VerifierParams& params, const SessionOptions& options) {
  ProofSize out;
  LocalClient client(prover);
  if (params.mode == ProofMode::kNonInteractive) {
    const NiProof proof = ni_prove(client, consensus, params, options, Hash32{});
    out.accepted = ni_verify(proof, consensus, params).accepted;
    out.json = ni_bundle_size(proof, Representation::kJson, options.gzip_level);
    out.binary = ni_bundle_size(proof, Representation::kBinary, options.gzip_level);
    out.zipped = ni_bundle_size(proof, Representation::kZipped, options.gzip_level);
    out.zipped_alt = ni_piecewise_zipped_size(proof, options.gzip_level);
    for (const BundleEntry& e : proof.entries) {
      switch (e.kind) {
        case ItemKind::kInfo: ++out.infos; break;
        case ItemKind::kHeader: ++out.headers; break;
        case ItemKind::kNode: ++out.nodes; break;
        case ItemKind::kAuthRoot: ++out.auth_roots; break;
        case ItemKind::kTotalWork: ++out.total_works; break;
        case ItemKind::kHeight: ++out.heights; break;
      }
    }
    return out;
  }
  SessionOptions opts = options;
  opts.measure = true;
  VerificationSession session(consensus, params, opts);
  out.accepted = session.check_prover(client).accepted;
  out.json = session.transcript_bytes(Representation::kJson);
  out.binary = session.transcript_bytes(Representation::kBinary);
  out.zipped = session.transcript_bytes(Representation::kZipped);
  out.zipped_alt = session.transcript_bytes(Representation::kZipped, Scope::kWholeProof);
  out.headers = session.count(ItemKind::kHeader);
  out.nodes = session.count(ItemKind::kNode);
  out.infos = session.count(ItemKind::kInfo);
  out.auth_roots = session.count(ItemKind::kAuthRoot);
  out.total_works = session.count(ItemKind::kTotalWork);
  out.heights = session.count(ItemKind::kHeight);
  return out;
}

std::vector<ProofSize> measure_reps(std::shared_ptr<const Chain> chain, const VerifierParams& params,
                                    const SessionOptions& options, std::uint64_t reps,
                                    std::uint64_t base_seed, Kernel kernel) {
  std::vector<ProofSize> out(reps);
  const bool ni = params.mode == ProofMode::kNonInteractive;
  std::shared_ptr<const ProverService> shared = make_local_prover(chain);
  const auto one = [&](std::uint64_t r) {
    SessionOptions opts = options;
    opts.seed = base_seed + r;
    if (ni && r > 0) {
      auto remined = std::make_shared<const Chain>(remine_tip(*chain, base_seed + r));
      out[r] = measure_proof(make_local_prover(remined), chain->consensus, params, opts);
    } else {
      out[r] = measure_proof(shared, chain->consensus, params, opts);
    }
  };
  const auto count = static_cast<std::int64_t>(reps);
  if (kernel == Kernel::kParallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < count; ++r) {
      try {
        one(static_cast<std::uint64_t>(r));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::int64_t r = 0; r < count; ++r) one(static_cast<std::uint64_t>(r));
  }
  return out;
}

MeanCi mean_ci95(std::span<const double> values) {
  if (values.empty()) throw ContractError("no values");
  const double n = static_cast<double>(values.size());
  double sum = 0;
  for (double v : values) sum += v;
  MeanCi out;
  out.mean = sum / n;
  out.low = out.high = out.mean;
  if (values.size() < 2) return out;
  double ss = 0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / (n - 1));
  const boost::math::students_t dist(n - 1);
  const double half = boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n);
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("need at least two paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("x values are all equal");
  LinearFit fit;
  fit.b = sxy / sxx;
  fit.a = my - fit.b * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.a + fit.b * x[i]);
    sse += r * r;
  }
  fit.r2 = syy == 0 ? 1.0 : 1.0 - sse / syy;
  return fit;
}

}  // namespace flyclient
