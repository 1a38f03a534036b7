// Serial vs OpenMP kernels. Arg 0 selects the kernel (0 serial, 1 parallel).
#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "flyclient/chain/chain.hpp"
#include "flyclient/mmr/batch.hpp"
#include "flyclient/prover/service.hpp"
#include "flyclient/verifier/experiments.hpp"
#include "flyclient/verifier/trials.hpp"

using namespace flyclient;

namespace {

Kernel kernel_of(const benchmark::State& state) { return state.range(0) ? Kernel::kParallel : Kernel::kSerial; }

std::vector<LeafMeta> leaves(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<LeafMeta> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& b : out[i].digest.bytes) b = static_cast<std::uint8_t>(rng());
    out[i].time = 1'600'000'000u + 75 * static_cast<std::uint32_t>(i);
    out[i].bits = 0x1d00ffffu;
    out[i].height = i;
  }
  return out;
}

std::shared_ptr<const Chain> chain(std::uint64_t n, PowKind engine) {
  ChainConfig cfg;
  cfg.length = n;
  cfg.engine = engine;
  cfg.seed = 1;
  return std::make_shared<const Chain>(build_honest_chain(cfg));
}

void BM_BuildNodes(benchmark::State& state) {
  const auto l = leaves(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_nodes(l, {}, kernel_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_BuildNodes)->ArgsProduct({{0, 1}, {1 << 14, 1 << 17}})->Unit(benchmark::kMillisecond);

void BM_CheckPow(benchmark::State& state) {
  static const auto c = chain(20000, PowKind::kEquihashStub);
  for (auto _ : state) benchmark::DoNotOptimize(check_pow(c->consensus, c->headers, kernel_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c->length()));
}
BENCHMARK(BM_CheckPow)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RunTrials(benchmark::State& state) {
  static const auto prover = make_local_prover(chain(10000, PowKind::kMockSha));
  const VerifierParams p = make_params(0.5, 100, 20, 10000, ProofMode::kInteractive);
  SessionOptions o;
  o.measure = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(verification_trials(prover, prover->consensus(), p, o, 32, 1, kernel_of(state)));
}
BENCHMARK(BM_RunTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MeasureReps(benchmark::State& state) {
  static const auto c = chain(10000, PowKind::kEquihashStub);
  const VerifierParams p = make_params(0.5, 100, 50, 10000, ProofMode::kInteractive);
  for (auto _ : state) benchmark::DoNotOptimize(measure_reps(c, p, {}, 8, 1, kernel_of(state)));
}
BENCHMARK(BM_MeasureReps)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
