#include <csignal>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "common.hpp"
#include "flyclient/codec/gas.hpp"
#include "flyclient/core/error.hpp"
#include "flyclient/params/params.hpp"
#include "flyclient/prover/http.hpp"
#include "flyclient/prover/service.hpp"
#include "flyclient/verifier/experiments.hpp"

namespace fc = flyclient;
namespace cli = flyclient::cli;

namespace {

const std::vector<std::string> kEngines = {"mock-sha", "equihash-stub", "ethash-stub"};
const std::vector<std::string> kSchedules = {"fixed", "linear", "random-walk"};
const std::vector<std::string> kModes = {"interactive", "non-interactive"};
const std::vector<std::string> kVariants = {"reference", "fixed-difficulty", "cache-less"};
const std::vector<std::string> kStyles = {"per-sample", "cumulative"};
const std::vector<std::string> kFormats = {"normal", "distilled"};
const std::vector<std::string> kRepresentations = {"json", "binary", "zipped"};

struct GenOptions {
  std::uint64_t length = 1000;
  std::optional<std::uint64_t> seed;
  std::string engine = "mock-sha";
  std::string schedule = "fixed";
  std::vector<std::uint64_t> upgrades;
  long double base_difficulty = 9e11L;
  long double growth = 2e-5L;
  double sigma = 0.02;
  double kappa = 0.01;
  double tau = 4.0;
  std::string out;
};

struct ForkOptions {
  std::string chain;
  std::uint64_t fork_height = 0;
  std::optional<std::uint64_t> budget_blocks;
  std::optional<std::string> budget_work;
  double validity_ratio = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct ServeOptions {
  std::string chain;
  std::string store;
  std::string sync_mode = "post-hoc";
  std::string listen = "127.0.0.1:8232";
  std::string representation = "normal";
  std::string port_file;
  bool resync = false;
};

struct SolveOptions {
  std::vector<double> n_a = {50};
  double n = 3e6;
  double lambda = 50;
  std::string mode = "interactive";
  double c51 = 20000;
  double d_tilde = 900;
  double rate = 48;
  std::uint64_t header_bytes = 1487;
  std::string csv;
};

struct ProtocolOptions {
  double c = 0.5;
  std::uint64_t L = 100;
  double lambda = 50;
  std::string mode = "interactive";
  std::string variant = "reference";
  std::string style = "per-sample";
  std::string format = "normal";
  int gzip_level = 6;
};

struct VerifyOptions {
  std::vector<std::string> chains;
  std::vector<std::string> endpoints;
  std::string manifest;
  ProtocolOptions protocol;
  std::optional<std::uint64_t> seed;
  std::string transcript;
  int timeout = 10;
};

struct ProveOptions {
  std::string chain;
  std::string endpoint;
  std::string manifest;
  ProtocolOptions protocol;
  std::string encoding = "zipped";
  std::string out;
  int timeout = 10;
};

struct VerifyNiOptions {
  std::string proof;
  std::string manifest;
  double c = 0.5;
  std::uint64_t L = 100;
  double lambda = 50;
};

struct BenchOptions {
  std::vector<std::uint64_t> lengths = {10000};
  std::vector<std::string> chains;
  std::string engine = "equihash-stub";
  std::string schedule = "fixed";
  std::vector<std::uint64_t> upgrades;
  std::uint64_t chain_seed = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t reps = 30;
  std::vector<std::string> modes = {"interactive"};
  std::vector<std::string> variants = {"reference"};
  std::vector<std::string> styles = {"per-sample"};
  std::vector<std::string> formats = {"normal"};
  double c = 0.5;
  std::uint64_t L = 100;
  double lambda = 50;
  int gzip_level = 6;
  std::string kernel = "parallel";
  std::string csv;
};

struct GasOptions {
  std::optional<std::string> bytes;
  std::optional<std::string> file;
  double gas_price_gwei = 0.125;
  double token_usd = 2100;
};

void add_protocol_options(CLI::App* sub, ProtocolOptions& p, bool with_mode) {
  sub->add_option("-c,--c", p.c, "Validity ratio c")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sub->add_option("-L,--L", p.L, "Fork length parameter L")->capture_default_str();
  sub->add_option("--lambda", p.lambda, "Security parameter")->capture_default_str();
  if (with_mode) sub->add_option("--mode", p.mode)->capture_default_str()->check(CLI::IsMember(kModes));
  sub->add_option("--variant", p.variant)->capture_default_str()->check(CLI::IsMember(kVariants));
  sub->add_option("--style", p.style)->capture_default_str()->check(CLI::IsMember(kStyles));
  sub->add_option("--format", p.format)->capture_default_str()->check(CLI::IsMember(kFormats));
  sub->add_option("--gzip-level", p.gzip_level)->capture_default_str()->check(CLI::Range(1, 9));
}

void reject_exclusive(const ProtocolOptions& p, bool non_interactive) {
  if (p.variant == "cache-less" && non_interactive) {
    throw CLI::ValidationError("--variant", "cache-less cannot be combined with non-interactive proofs");
  }
  if (p.variant == "cache-less" && p.style == "cumulative") {
    throw CLI::ValidationError("--variant", "cache-less cannot be combined with --style cumulative");
  }
  if (p.format == "distilled" && p.style != "cumulative") {
    throw CLI::ValidationError("--format", "distilled proofs require --style cumulative");
  }
}

fc::VerifierParams verifier_params(double c, std::uint64_t L, double lambda, fc::ProofMode mode) {
  fc::VerifierParams p;
  p.c = c;
  p.L = L;
  p.lambda = lambda;
  p.mode = mode;
  return p;
}

fc::SessionOptions session_options(const ProtocolOptions& p) {
  fc::SessionOptions o;
  o.variant = fc::variant_from_string(p.variant);
  o.style = fc::proof_style_from_string(p.style);
  o.format = fc::proof_format_from_string(p.format);
  o.gzip_level = p.gzip_level;
  return o;
}

fc::ConsensusParams consensus_for(const std::string& manifest, const std::vector<std::string>& chains) {
  if (!manifest.empty()) return fc::read_manifest(cli::chain_dir_of(manifest)).consensus;
  if (!chains.empty()) return fc::read_manifest(cli::chain_dir_of(chains.front())).consensus;
  throw fc::ContractError("--manifest is required when only endpoints are given");
}

int cmd_chain_gen(const GenOptions& o) {
  fc::ChainConfig cfg;
  cfg.length = o.length;
  cfg.engine = fc::pow_kind_from_string(o.engine);
  cfg.schedule.kind = fc::schedule_kind_from_string(o.schedule);
  cfg.schedule.base_difficulty = o.base_difficulty;
  cfg.schedule.growth = o.growth;
  cfg.schedule.sigma = o.sigma;
  cfg.schedule.kappa = o.kappa;
  cfg.schedule.tau = o.tau;
  cfg.upgrades = o.upgrades;
  cfg.seed = cli::resolve_seed(o.seed, "chain");
  const fc::Chain chain = fc::build_honest_chain(cfg);
  const fc::Hash32 digest = fc::save_chain(chain, o.out);
  std::cout << "chain " << o.out << " length " << chain.length() << " branches " << chain.branches.size()
            << "\nmanifest digest " << digest.hex() << "\n";
  return cli::kExitOk;
}

int cmd_chain_fork(const ForkOptions& o) {
  fc::LoadOptions load;
  load.check_pow = false;
  const fc::Chain honest = fc::load_chain(cli::chain_dir_of(o.chain), load);
  if (o.fork_height >= honest.length()) throw fc::ContractError("--fork-height must lie inside the chain");
  fc::ForkSpec spec;
  spec.fork_height = o.fork_height;
  spec.validity_ratio = o.validity_ratio;
  spec.seed = cli::resolve_seed(o.seed, "fork");
  if (o.budget_work) {
    spec.work_budget = cli::parse_u256(*o.budget_work);
  } else {
    spec.work_budget = fc::work_from_bits(honest.header(o.fork_height).bits) * *o.budget_blocks;
  }
  const fc::Chain fork = fc::build_adversarial_fork(honest, spec);
  const fc::Hash32 digest = fc::save_chain(fork, o.out);
  std::cout << "fork " << o.out << " length " << fork.length() << " valid " << fork.fork->valid_blocks
            << " invalid " << fork.fork->invalid_blocks << "\nmanifest digest " << digest.hex() << "\n";
  return cli::kExitOk;
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw fc::ContractError("--listen must be host:port");
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

int cmd_prover_serve(const ServeOptions& o) {
  const std::filesystem::path dir = cli::chain_dir_of(o.chain);
  const std::filesystem::path store_path = o.store.empty() ? dir / "nodes.store" : std::filesystem::path(o.store);
  fc::LoadOptions load;
  load.check_pow = false;
  auto chain = std::make_shared<const fc::Chain>(fc::load_chain(dir, load));
  auto service = std::make_shared<fc::ProverService>(chain);
  service->set_default_format(fc::proof_format_from_string(o.representation));

  // Signals go to sigwait below, not to the server threads.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const auto [host, port] = split_listen(o.listen);
  fc::HttpProverServer server(service, host, port);
  server.start();
  std::cout << "listening on " << host << ":" << server.port() << std::endl;
  if (!o.port_file.empty()) std::ofstream(o.port_file) << server.port() << "\n";

  std::shared_ptr<const fc::NodeStore> store;
  if (!o.resync && std::filesystem::exists(store_path)) {
    store = std::make_shared<const fc::NodeStore>(fc::NodeStore::open(store_path));
    std::cout << "opened store " << store_path.string() << std::endl;
  } else {
    store = std::make_shared<const fc::NodeStore>(
        fc::sync_store(dir, fc::sync_mode_from_string(o.sync_mode), store_path));
    std::cout << "synced store " << store_path.string() << " (" << o.sync_mode << ")" << std::endl;
  }
  service->attach_store(store);
  std::cout << "serving " << chain->length() << " headers, " << store->total_nodes() << " nodes" << std::endl;

  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  return cli::kExitOk;
}

int cmd_params_solve(const SolveOptions& o) {
  const fc::ProofMode mode = fc::proof_mode_from_string(o.mode);
  std::ofstream file;
  std::ostream* csv = nullptr;
  if (o.csv == "-") {
    csv = &std::cout;
  } else if (!o.csv.empty()) {
    file.open(o.csv);
    if (!file) throw fc::ContractError("cannot write " + o.csv);
    csv = &file;
  }
  if (csv) *csv << "n_a,mode,c_star,L_star,n_det,n_prob,total,proof_bytes,baseline_total,saving_pct,budget_usd\n";
  if (o.csv != "-") {
    std::cout << std::left << std::setw(10) << "n_a" << std::setw(10) << "c*" << std::setw(8) << "L*"
              << std::setw(8) << "n_det" << std::setw(8) << "n_prob" << std::setw(8) << "total" << std::setw(12)
              << "bytes" << std::setw(10) << "saving" << "budget_usd\n";
  }
  for (double n_a : o.n_a) {
    const fc::Optimum opt = fc::optimal_c(mode, n_a, o.n, o.lambda);
    const fc::SamplingCounts base = fc::counts_for_budget(mode, 0.5, n_a, o.n, o.lambda);
    const double saving = 100.0 * (1.0 - static_cast<double>(opt.counts.total()) / static_cast<double>(base.total()));
    fc::AdversaryBudget budget;
    budget.d_tilde = o.d_tilde;
    budget.w_a = n_a * o.d_tilde;
    budget.c51_per_hour = o.c51;
    budget.honest_blocks_per_hour = o.rate;
    const double usd = fc::expected_budget(budget);
    const std::uint64_t bytes = opt.counts.total() * o.header_bytes;
    if (csv) {
      *csv << std::setprecision(10) << n_a << "," << o.mode << "," << std::setprecision(6) << opt.c << "," << opt.L << ","
           << opt.counts.n_det << "," << opt.counts.n_prob << "," << opt.counts.total() << "," << bytes << ","
           << base.total() << "," << std::fixed << std::setprecision(2) << saving << "," << usd
           << std::defaultfloat << "\n";
    }
    if (o.csv != "-") {
      std::cout << std::left << std::setw(10) << std::setprecision(10) << n_a << std::setw(10) << std::setprecision(4) << opt.c
                << std::setw(8) << opt.L << std::setw(8) << opt.counts.n_det << std::setw(8) << opt.counts.n_prob
                << std::setw(8) << opt.counts.total() << std::setw(12) << bytes << std::setw(10)
                << (std::to_string(static_cast<int>(saving + (saving >= 0 ? 0.5 : -0.5))) + "%") << std::fixed
                << std::setprecision(2) << usd << std::defaultfloat << "\n";
    }
  }
  return cli::kExitOk;
}

void print_report(const fc::ProverReport& r) {
  const fc::CheckResult& res = r.result;
  std::cout << "prover " << r.name << ": ";
  if (res.accepted) {
    std::cout << "accepted";
  } else if (res.transport_failure) {
    std::cout << "unreachable (" << res.reason << ")";
  } else {
    std::cout << "rejected (" << res.reason << ")";
  }
  if (!res.transport_failure) {
    std::cout << " blocks " << res.block_count << " work " << fc::u256_hex(res.total_work)
              << (res.full_validation ? " full-validation" : "") << " n_det " << res.counts.n_det << " n_prob "
              << res.counts.n_prob;
  }
  std::cout << "\n";
}

int cmd_verify(const VerifyOptions& o) {
  const fc::ProofMode mode = fc::proof_mode_from_string(o.protocol.mode);
  const fc::ConsensusParams consensus = consensus_for(o.manifest, o.chains);
  const fc::VerifierParams params = verifier_params(o.protocol.c, o.protocol.L, o.protocol.lambda, mode);
  fc::SessionOptions options = session_options(o.protocol);
  if (mode == fc::ProofMode::kInteractive) options.seed = cli::resolve_seed(o.seed, "sampling");
  options.measure = !o.transcript.empty();
  fc::validate_options(consensus, params, options);

  cli::ProverSet provers = cli::open_provers(o.chains, o.endpoints, consensus.node_format(), o.timeout);
  const fc::VerifyOutcome outcome = fc::flyclient_verify(provers.pointers(), consensus, params, options);
  for (const fc::ProverReport& r : outcome.reports) print_report(r);
  if (!o.transcript.empty()) {
    std::ofstream out(o.transcript);
    if (!out) throw fc::ContractError("cannot write " + o.transcript);
    fc::write_transcript_csv(out, outcome.transcript);
  }
  if (outcome.accepted) {
    const fc::CheckResult& res = outcome.reports[*outcome.accepted].result;
    std::cout << "result: accept " << outcome.reports[*outcome.accepted].name << " tip "
              << fc::view_hash(*res.tip).hex() << "\n";
    return cli::kExitOk;
  }
  if (outcome.any_transport_failure()) {
    std::cout << "result: no prover accepted; transport failure\n";
    return cli::kExitTransport;
  }
  std::cout << "result: reject\n";
  return cli::kExitReject;
}

int cmd_prove_ni(const ProveOptions& o) {
  const std::vector<std::string> chains = o.chain.empty() ? std::vector<std::string>{} : std::vector{o.chain};
  const std::vector<std::string> endpoints =
      o.endpoint.empty() ? std::vector<std::string>{} : std::vector{o.endpoint};
  const std::string manifest_path = o.manifest.empty() ? o.chain : o.manifest;
  if (manifest_path.empty()) throw fc::ContractError("--manifest is required with --endpoint");
  const fc::Manifest manifest = fc::read_manifest(cli::chain_dir_of(manifest_path));
  const fc::VerifierParams params =
      verifier_params(o.protocol.c, o.protocol.L, o.protocol.lambda, fc::ProofMode::kNonInteractive);
  fc::SessionOptions options = session_options(o.protocol);
  options.measure = false;
  fc::validate_options(manifest.consensus, params, options);

  cli::ProverSet provers = cli::open_provers(chains, endpoints, manifest.consensus.node_format(), o.timeout);
  fc::NiProof proof;
  try {
    proof = fc::ni_prove(*provers.clients.front(), manifest.consensus, params, options, manifest.digest);
  } catch (const fc::TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitTransport;
  } catch (const fc::ServiceUnavailableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitTransport;
  }
  const fc::Bytes file = fc::encode_ni_file(proof, fc::representation_from_string(o.encoding), o.protocol.gzip_level);
  fc::write_file(o.out, file);
  const fc::CheckResult check = fc::ni_verify(proof, manifest.consensus, params);
  std::cout << "proof " << o.out << " bytes " << file.size() << " entries " << proof.entries.size() << "\n";
  if (!check.accepted) {
    std::cout << "chain rejected while proving: " << check.reason << "\n";
    return cli::kExitReject;
  }
  return cli::kExitOk;
}

int cmd_verify_ni(const VerifyNiOptions& o) {
  fc::NiProof proof;
  try {
    proof = fc::decode_ni_file(fc::read_file(o.proof));
  } catch (const fc::DecodeError& e) {
    std::cerr << "error: " << o.proof << ": " << e.what() << "\n";
    return cli::kExitDecode;
  }
  const fc::ConsensusParams consensus = fc::read_manifest(cli::chain_dir_of(o.manifest)).consensus;
  const fc::VerifierParams params = verifier_params(o.c, o.L, o.lambda, fc::ProofMode::kNonInteractive);
  const fc::CheckResult res = fc::ni_verify(proof, consensus, params);
  std::cout << "proof for manifest " << proof.manifest_digest.hex() << "\n";
  if (res.accepted) {
    std::cout << "result: accept blocks " << res.block_count << " tip " << fc::view_hash(*res.tip).hex() << "\n";
    return cli::kExitOk;
  }
  std::cout << "result: reject (" << res.reason << ")\n";
  return cli::kExitReject;
}

int cmd_bench_proof_size(const BenchOptions& o) {
  const fc::Kernel kernel = o.kernel == "serial" ? fc::Kernel::kSerial : fc::Kernel::kParallel;
  const std::uint64_t base_seed = cli::resolve_seed(o.seed, "sampling");
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.csv.empty() && o.csv != "-") {
    file.open(o.csv);
    if (!file) throw fc::ContractError("cannot write " + o.csv);
    out = &file;
  }
  *out << "chain_length,engine,mode,representation,variant,style,format,gzip_level,reps,accepted,mean_bytes,"
          "ci95_low,ci95_high,mean_headers,mean_nodes,mean_infos,mean_authroots,mean_totalwork,mean_heights\n";

  std::vector<std::shared_ptr<const fc::Chain>> chains;
  if (!o.chains.empty()) {
    fc::LoadOptions load;
    load.check_pow = false;
    for (const std::string& dir : o.chains) {
      chains.push_back(std::make_shared<const fc::Chain>(fc::load_chain(cli::chain_dir_of(dir), load)));
    }
  } else {
    for (std::uint64_t n : o.lengths) {
      fc::ChainConfig cfg;
      cfg.length = n;
      cfg.engine = fc::pow_kind_from_string(o.engine);
      cfg.schedule.kind = fc::schedule_kind_from_string(o.schedule);
      cfg.upgrades = o.upgrades;
      cfg.seed = o.chain_seed;
      chains.push_back(std::make_shared<const fc::Chain>(fc::build_honest_chain(cfg)));
    }
  }

  for (const auto& chain : chains) {
    for (const std::string& mode_name : o.modes) {
      const fc::ProofMode mode = fc::proof_mode_from_string(mode_name);
      const fc::VerifierParams params = verifier_params(o.c, o.L, o.lambda, mode);
      for (const std::string& variant : o.variants) {
        for (const std::string& style : o.styles) {
          for (const std::string& format : o.formats) {
            ProtocolOptions p;
            p.variant = variant;
            p.style = style;
            p.format = format;
            p.gzip_level = o.gzip_level;
            fc::SessionOptions options = session_options(p);
            try {
              reject_exclusive(p, mode == fc::ProofMode::kNonInteractive);
              fc::validate_options(chain->consensus, params, options);
            } catch (const std::exception& e) {
              std::cerr << "skipping " << mode_name << "/" << variant << "/" << style << "/" << format << ": "
                        << e.what() << "\n";
              continue;
            }
            const std::vector<fc::ProofSize> runs = fc::measure_reps(chain, params, options, o.reps, base_seed, kernel);
            std::uint64_t accepted = 0;
            for (const auto& r : runs) accepted += r.accepted ? 1 : 0;
            const auto mean_of = [&](std::uint64_t fc::ProofSize::*field) {
              double s = 0;
              for (const auto& r : runs) s += static_cast<double>(r.*field);
              return s / static_cast<double>(runs.size());
            };
            const bool ni = mode == fc::ProofMode::kNonInteractive;
            const std::vector<std::pair<std::string, std::uint64_t fc::ProofSize::*>> reps = {
                {"json", &fc::ProofSize::json},
                {"binary", &fc::ProofSize::binary},
                {"zipped", &fc::ProofSize::zipped},
                {ni ? "zipped-piecewise" : "zipped-whole", &fc::ProofSize::zipped_alt},
            };
            for (const auto& [rep_name, field] : reps) {
              std::vector<double> values;
              for (const auto& r : runs) values.push_back(static_cast<double>(r.*field));
              const fc::MeanCi ci = fc::mean_ci95(values);
              *out << chain->length() << "," << fc::to_string(chain->consensus.engine) << "," << mode_name << ","
                   << rep_name << "," << variant << "," << style << "," << format << "," << o.gzip_level << ","
                   << runs.size() << "," << accepted << "," << std::fixed << std::setprecision(1) << ci.mean << ","
                   << ci.low << "," << ci.high << "," << std::setprecision(2) << mean_of(&fc::ProofSize::headers)
                   << "," << mean_of(&fc::ProofSize::nodes) << "," << mean_of(&fc::ProofSize::infos) << ","
                   << mean_of(&fc::ProofSize::auth_roots) << "," << mean_of(&fc::ProofSize::total_works) << ","
                   << mean_of(&fc::ProofSize::heights) << std::defaultfloat << "\n";
            }
            out->flush();
          }
        }
      }
    }
  }
  return cli::kExitOk;
}

int cmd_gas(const GasOptions& o) {
  fc::GasPrices prices;
  prices.gas_price_gwei = o.gas_price_gwei;
  prices.token_usd = o.token_usd;
  fc::GasEstimate est;
  if (o.file) {
    est = fc::gas_estimate(fc::read_file(*o.file), prices);
  } else {
    est = fc::gas_estimate(cli::parse_byte_count(*o.bytes), prices);
  }
  std::cout << "bytes " << est.bytes << "\nnonzero_bytes " << est.nonzero_bytes
            << (est.approximated ? " (all bytes assumed non-zero)" : "") << "\ngas " << est.gas << "\ncost_eth "
            << std::setprecision(8) << est.cost_token << "\ncost_usd " << std::fixed << std::setprecision(2)
            << est.cost_usd << "\n";
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FlyClient light-client toolkit"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  // Cross-option rules, run once the config file has been merged in.
  std::vector<std::pair<CLI::App*, std::function<void()>>> checks;

  GenOptions gen_opts;
  ForkOptions fork_opts;
  ServeOptions serve_opts;
  SolveOptions solve_opts;
  VerifyOptions verify_opts;
  ProveOptions prove_opts;
  VerifyNiOptions verify_ni_opts;
  BenchOptions bench_opts;
  GasOptions gas_opts;

  auto* chain = app.add_subcommand("chain", "Generate synthetic chains")->require_subcommand(1);
  auto* gen = chain->add_subcommand("gen", "Build an honest chain directory");
  gen->add_option("--length", gen_opts.length, "Number of blocks including genesis")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opts.seed, "Chain seed (drawn and printed when omitted)");
  gen->add_option("--engine", gen_opts.engine)->capture_default_str()->check(CLI::IsMember(kEngines));
  gen->add_option("--schedule", gen_opts.schedule)->capture_default_str()->check(CLI::IsMember(kSchedules));
  gen->add_option("--upgrades", gen_opts.upgrades, "Comma-separated network-upgrade heights")->delimiter(',');
  gen->add_option("--base-difficulty", gen_opts.base_difficulty)->capture_default_str();
  gen->add_option("--growth", gen_opts.growth, "Linear schedule growth per block")->capture_default_str();
  gen->add_option("--sigma", gen_opts.sigma, "Random-walk step size")->capture_default_str();
  gen->add_option("--kappa", gen_opts.kappa, "Random-walk mean reversion")->capture_default_str();
  gen->add_option("--tau", gen_opts.tau, "Bound on adjacent target ratio")->capture_default_str();
  gen->add_option("--out", gen_opts.out, "Output chain directory")->required();
  checks.emplace_back(gen, [&] {
    for (std::size_t i = 0; i < gen_opts.upgrades.size(); ++i) {
      const std::uint64_t h = gen_opts.upgrades[i];
      if (h == 0 || h >= gen_opts.length) {
        throw CLI::ValidationError("--upgrades", "height " + std::to_string(h) + " is outside (0, length)");
      }
      if (i > 0 && h <= gen_opts.upgrades[i - 1]) {
        throw CLI::ValidationError("--upgrades", "heights must be strictly increasing");
      }
    }
  });

  auto* fork = chain->add_subcommand("fork", "Build an adversarial fork of an existing chain");
  fork->add_option("--chain", fork_opts.chain, "Honest chain directory")->required();
  fork->add_option("--fork-height", fork_opts.fork_height, "Last honest block kept")->required();
  auto* bb = fork->add_option("--budget-blocks", fork_opts.budget_blocks,
                              "Budget in blocks of the difficulty at the fork point");
  auto* bw = fork->add_option("--budget-work", fork_opts.budget_work, "Budget in work units (decimal or 0x hex)");
  bb->excludes(bw);
  fork->add_option("--validity-ratio", fork_opts.validity_ratio)
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fork->add_option("--seed", fork_opts.seed);
  fork->add_option("--out", fork_opts.out)->required();
  checks.emplace_back(fork, [&] {
    if (!fork_opts.budget_blocks && !fork_opts.budget_work) {
      throw CLI::RequiredError("--budget-blocks or --budget-work");
    }
  });

  auto* prover = app.add_subcommand("prover", "Prover service")->require_subcommand(1);
  auto* serve = prover->add_subcommand("serve", "Serve a chain over JSON-RPC/HTTP");
  serve->add_option("--chain", serve_opts.chain, "Chain directory")->envname("FLYCLIENT_CHAIN_DIR")->required();
  serve->add_option("--store", serve_opts.store, "Node store path (default <chain>/nodes.store)")
      ->envname("FLYCLIENT_STORE");
  serve->add_option("--sync-mode", serve_opts.sync_mode)
      ->capture_default_str()
      ->check(CLI::IsMember({"during-sync", "post-hoc"}));
  serve->add_flag("--resync", serve_opts.resync, "Rebuild the store even if it exists");
  serve->add_option("--listen", serve_opts.listen, "host:port (port 0 picks a free port)")
      ->capture_default_str()
      ->envname("FLYCLIENT_LISTEN");
  serve->add_option("--representation", serve_opts.representation,
                    "Header format for requests that do not ask for one")
      ->capture_default_str()
      ->envname("FLYCLIENT_REPRESENTATION")
      ->check(CLI::IsMember(kFormats));
  serve->add_option("--port-file", serve_opts.port_file, "Write the bound port here");

  auto* params = app.add_subcommand("params", "Protocol parametrization")->require_subcommand(1);
  auto* solve = params->add_subcommand("solve", "Optimal validity ratio for adversary budgets");
  solve->add_option("--n-a", solve_opts.n_a, "Adversary budget in blocks (comma-separated sweep)")
      ->delimiter(',')
      ->capture_default_str();
  solve->add_option("--n", solve_opts.n, "Chain length")->capture_default_str();
  solve->add_option("--lambda", solve_opts.lambda)->capture_default_str();
  solve->add_option("--mode", solve_opts.mode)->capture_default_str()->check(CLI::IsMember(kModes));
  solve->add_option("--c51", solve_opts.c51, "Hourly attack cost (USD)")->capture_default_str();
  solve->add_option("--d-tilde", solve_opts.d_tilde, "Difficulty per block (GH)")->capture_default_str();
  solve->add_option("--rate", solve_opts.rate, "Honest blocks per hour")->capture_default_str();
  solve->add_option("--header-bytes", solve_opts.header_bytes)->capture_default_str();
  solve->add_option("--csv", solve_opts.csv, "CSV output path ('-' for stdout)");

  auto* verify = app.add_subcommand("verify", "Verify one or more provers");
  verify->add_option("--chain", verify_opts.chains, "Chain directory served in-process (repeatable)");
  verify->add_option("--endpoint", verify_opts.endpoints, "Prover endpoint host:port (repeatable)");
  verify->add_option("--manifest", verify_opts.manifest, "Chain directory or manifest.json with consensus rules");
  add_protocol_options(verify, verify_opts.protocol, true);
  verify->add_option("--seed", verify_opts.seed, "Sampling seed (drawn and printed when omitted)");
  verify->add_option("--transcript", verify_opts.transcript, "Transcript CSV output path");
  verify->add_option("--timeout", verify_opts.timeout, "HTTP timeout in seconds")->capture_default_str();
  checks.emplace_back(verify, [&] {
    if (verify_opts.chains.empty() && verify_opts.endpoints.empty()) {
      throw CLI::RequiredError("--chain or --endpoint");
    }
    reject_exclusive(verify_opts.protocol, verify_opts.protocol.mode == "non-interactive");
  });

  auto* prove_ni = app.add_subcommand("prove-ni", "Write a non-interactive proof file");
  prove_opts.protocol.style = "cumulative";
  auto* pc = prove_ni->add_option("--chain", prove_opts.chain, "Chain directory served in-process");
  auto* pe = prove_ni->add_option("--endpoint", prove_opts.endpoint, "Prover endpoint host:port");
  pc->excludes(pe);
  prove_ni->add_option("--manifest", prove_opts.manifest);
  add_protocol_options(prove_ni, prove_opts.protocol, false);
  prove_ni->add_option("--encoding", prove_opts.encoding)
      ->capture_default_str()
      ->check(CLI::IsMember(kRepresentations));
  prove_ni->add_option("--out", prove_opts.out)->required();
  prove_ni->add_option("--timeout", prove_opts.timeout)->capture_default_str();
  checks.emplace_back(prove_ni, [&] {
    if (prove_opts.chain.empty() && prove_opts.endpoint.empty()) throw CLI::RequiredError("--chain or --endpoint");
    reject_exclusive(prove_opts.protocol, true);
  });

  auto* verify_ni = app.add_subcommand("verify-ni", "Check a non-interactive proof file");
  verify_ni->add_option("--proof", verify_ni_opts.proof)->required();
  verify_ni->add_option("--manifest", verify_ni_opts.manifest, "Chain directory or manifest.json")->required();
  verify_ni->add_option("-c,--c", verify_ni_opts.c)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  verify_ni->add_option("-L,--L", verify_ni_opts.L)->capture_default_str();
  verify_ni->add_option("--lambda", verify_ni_opts.lambda)->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Measurements")->require_subcommand(1);
  auto* proof_size = bench->add_subcommand("proof-size", "Proof bytes over repeated runs");
  proof_size->add_option("--lengths", bench_opts.lengths)->delimiter(',')->capture_default_str();
  proof_size->add_option("--chain", bench_opts.chains, "Use existing chain directories instead of --lengths");
  proof_size->add_option("--engine", bench_opts.engine)->capture_default_str()->check(CLI::IsMember(kEngines));
  proof_size->add_option("--schedule", bench_opts.schedule)->capture_default_str()->check(CLI::IsMember(kSchedules));
  proof_size->add_option("--upgrades", bench_opts.upgrades)->delimiter(',');
  proof_size->add_option("--chain-seed", bench_opts.chain_seed)->capture_default_str();
  proof_size->add_option("--seed", bench_opts.seed, "Base sampling seed (drawn and printed when omitted)");
  proof_size->add_option("--reps", bench_opts.reps)->capture_default_str()->check(CLI::PositiveNumber);
  proof_size->add_option("--mode", bench_opts.modes)->delimiter(',')->check(CLI::IsMember(kModes));
  proof_size->add_option("--variant", bench_opts.variants)->delimiter(',')->check(CLI::IsMember(kVariants));
  proof_size->add_option("--style", bench_opts.styles)->delimiter(',')->check(CLI::IsMember(kStyles));
  proof_size->add_option("--format", bench_opts.formats)->delimiter(',')->check(CLI::IsMember(kFormats));
  proof_size->add_option("-c,--c", bench_opts.c)->capture_default_str();
  proof_size->add_option("-L,--L", bench_opts.L)->capture_default_str();
  proof_size->add_option("--lambda", bench_opts.lambda)->capture_default_str();
  proof_size->add_option("--gzip-level", bench_opts.gzip_level)->capture_default_str()->check(CLI::Range(1, 9));
  proof_size->add_option("--kernel", bench_opts.kernel)
      ->capture_default_str()
      ->check(CLI::IsMember({"serial", "parallel"}));
  proof_size->add_option("--csv", bench_opts.csv, "CSV output path (default stdout)");

  auto* gas = app.add_subcommand("gas", "Calldata gas for a proof");
  auto* gb = gas->add_option("--bytes", gas_opts.bytes, "Proof size, e.g. 1258291, 320KiB, 1.2MiB");
  auto* gf = gas->add_option("--file", gas_opts.file, "Proof file (exact non-zero byte count)");
  gb->excludes(gf);
  gas->add_option("--gas-price-gwei", gas_opts.gas_price_gwei)->capture_default_str();
  gas->add_option("--token-usd", gas_opts.token_usd)->capture_default_str();
  checks.emplace_back(gas, [&] {
    if (!gas_opts.bytes && !gas_opts.file) throw CLI::RequiredError("--bytes or --file");
  });

  try {
    app.parse(argc, argv);
    for (const auto& [sub, check] : checks) {
      if (sub->parsed()) check();
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return cmd_chain_gen(gen_opts);
    if (fork->parsed()) return cmd_chain_fork(fork_opts);
    if (serve->parsed()) return cmd_prover_serve(serve_opts);
    if (solve->parsed()) return cmd_params_solve(solve_opts);
    if (verify->parsed()) return cmd_verify(verify_opts);
    if (prove_ni->parsed()) return cmd_prove_ni(prove_opts);
    if (verify_ni->parsed()) return cmd_verify_ni(verify_ni_opts);
    if (proof_size->parsed()) return cmd_bench_proof_size(bench_opts);
    if (gas->parsed()) return cmd_gas(gas_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  }
  return cli::kExitError;
}
