#include <gtest/gtest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "support.hpp"

namespace {

struct CliRun {
  int rc = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(FLYCLIENT_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string line_with(const std::string& text, const std::string& needle) {
  for (const std::string& l : split(text, '\n')) {
    if (l.find(needle) != std::string::npos) return l;
  }
  return {};
}

// One chain directory shared by the tests below.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new flytest::TempDir("cli");
    const CliRun gen = run("chain gen --length 3000 --seed 3 --engine equihash-stub --upgrades 1000 --out " +
                        chain().string());
    ASSERT_EQ(gen.rc, 0) << gen.out;
    const CliRun f = run("chain fork --chain " + chain().string() +
                      " --fork-height 2880 --budget-blocks 80 --validity-ratio 0.5 --seed 4 --out " +
                      fork().string());
    ASSERT_EQ(f.rc, 0) << f.out;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::filesystem::path chain() { return *dir_ / "chain"; }
  static std::filesystem::path fork() { return *dir_ / "fork"; }
  static std::filesystem::path path(const std::string& name) { return *dir_ / name; }

  static flytest::TempDir* dir_;
};

flytest::TempDir* Cli::dir_ = nullptr;

}  // namespace

TEST_F(Cli, ChainGenIsDeterministic) {
  const CliRun a = run("chain gen --length 400 --seed 9 --engine ethash-stub --out " + path("g1").string());
  const CliRun b = run("chain gen --length 400 --seed 9 --engine ethash-stub --out " + path("g2").string());
  const CliRun c = run("chain gen --length 400 --seed 10 --engine ethash-stub --out " + path("g3").string());
  ASSERT_EQ(a.rc, 0) << a.out;
  const std::string da = line_with(a.out, "manifest digest").substr(16);
  EXPECT_EQ(da, line_with(b.out, "manifest digest").substr(16));
  EXPECT_NE(da, line_with(c.out, "manifest digest").substr(16));
  EXPECT_EQ(slurp(path("g1") / "headers.bin"), slurp(path("g2") / "headers.bin"));
  EXPECT_EQ(slurp(path("g1") / "headers.bin").size(), 24u + 400u * (8 + 32 + 32 + 175));
}

TEST_F(Cli, ManifestListsBranches) {
  const auto m = nlohmann::json::parse(slurp(chain() / "manifest.json"));
  EXPECT_EQ(m.at("branches").size(), 2u);
  EXPECT_TRUE(std::filesystem::exists(chain() / "branch_0.mmr"));
  EXPECT_TRUE(std::filesystem::exists(chain() / "branch_1.mmr"));
  const auto fm = nlohmann::json::parse(slurp(fork() / "manifest.json"));
  EXPECT_EQ(fm.at("kind"), "fork");
}

TEST_F(Cli, BadArgumentsFail) {
  EXPECT_NE(run("chain gen --length 500 --upgrades 200,100 --out " + path("bad").string()).rc, 0);
  EXPECT_NE(run("chain gen --length 500 --upgrades 600 --out " + path("bad").string()).rc, 0);
  EXPECT_NE(run("chain gen --length 500 --engine scrypt --out " + path("bad").string()).rc, 0);
  EXPECT_NE(run("verify --chain " + chain().string() + " --variant cache-less --mode non-interactive").rc, 0);
  EXPECT_NE(run("verify --chain " + chain().string() + " --format distilled").rc, 0);
  EXPECT_NE(run("gas --bytes 10 --file x").rc, 0);
  EXPECT_NE(run("no-such-command").rc, 0);
}

TEST_F(Cli, ParamsSolveRows) {
  const CliRun r = run("params solve --csv - --mode interactive");
  ASSERT_EQ(r.rc, 0) << r.out;
  const auto lines = split(r.out, '\n');
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[0], "n_a,mode,c_star,L_star,n_det,n_prob,total,proof_bytes,baseline_total,saving_pct,budget_usd");
  auto f = split(lines[1], ',');
  ASSERT_EQ(f.size(), 11u);
  EXPECT_NEAR(std::stod(f[2]), 0.25, 0.01);
  EXPECT_EQ(f[3], "200");
  EXPECT_EQ(f[6], "423");
  EXPECT_EQ(f[7], std::to_string(423 * 1487));
  EXPECT_EQ(f[8], "598");
  EXPECT_GE(std::stod(f[9]), 28.0);
  EXPECT_NEAR(std::stod(f[10]), 20833.33, 0.5);

  const CliRun ni = run("params solve --csv - --mode non-interactive");
  ASSERT_EQ(ni.rc, 0) << ni.out;
  f = split(split(ni.out, '\n').at(1), ',');
  ASSERT_EQ(f.size(), 11u);
  EXPECT_NEAR(std::stod(f[2]), 0.2161, 0.005);
  EXPECT_EQ(f[3], "231");
  EXPECT_EQ(f[6], "504");
  EXPECT_EQ(f[8], "802");
  EXPECT_GE(std::stod(f[9]), 36.0);

  const CliRun multi = run("params solve --csv - --n-a 10,50,100");
  EXPECT_EQ(split(multi.out, '\n').size(), 1u + 3u);
}

TEST_F(Cli, VerifyExitCodes) {
  const CliRun ok = run("verify --chain " + chain().string() + " -L 30 --lambda 20 --seed 1");
  EXPECT_EQ(ok.rc, 0) << ok.out;
  EXPECT_NE(line_with(ok.out, "result: accept").size(), 0u);

  const CliRun bad = run("verify --chain " + fork().string() + " -L 30 --lambda 20 --seed 1");
  EXPECT_EQ(bad.rc, 1) << bad.out;
  EXPECT_NE(line_with(bad.out, "result: reject").size(), 0u);

  const CliRun both = run("verify --chain " + fork().string() + " --chain " + chain().string() +
                       " -L 30 --lambda 20 --seed 1 --transcript " + path("t.csv").string());
  EXPECT_EQ(both.rc, 0) << both.out;
  EXPECT_NE(line_with(both.out, "rejected").size(), 0u);
  const auto rows = split(slurp(path("t.csv")), '\n');
  ASSERT_GT(rows.size(), 30u);
  EXPECT_EQ(rows[0], "kind,branch,index_or_height,bytes_json,bytes_binary,bytes_zipped");

  const CliRun dead = run("verify --endpoint 127.0.0.1:1 --manifest " + chain().string() + " --timeout 1");
  EXPECT_EQ(dead.rc, 2) << dead.out;
}

TEST_F(Cli, NonInteractiveRoundTrip) {
  for (const std::string enc : {"json", "binary", "zipped"}) {
    const std::string file = path("p." + enc).string();
    const CliRun p = run("prove-ni --chain " + chain().string() + " -L 30 --lambda 20 --encoding " + enc +
                      " --out " + file);
    ASSERT_EQ(p.rc, 0) << p.out;
    const CliRun v = run("verify-ni --proof " + file + " --manifest " + chain().string() + " -L 30 --lambda 20");
    EXPECT_EQ(v.rc, 0) << v.out;
    // Different parameters ask for items the proof does not hold.
    const CliRun w = run("verify-ni --proof " + file + " --manifest " + chain().string() + " -L 31 --lambda 20");
    EXPECT_EQ(w.rc, 1) << w.out;
  }
  const std::string bytes = slurp(path("p.binary"));
  {
    std::ofstream cut(path("cut.flni"), std::ios::binary);
    cut.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  }
  EXPECT_EQ(run("verify-ni --proof " + path("cut.flni").string() + " --manifest " + chain().string()).rc, 3);
  EXPECT_EQ(run("verify-ni --proof " + path("cut.flni").string() + "x --manifest " + chain().string()).rc, 4);

  const CliRun f = run("prove-ni --chain " + fork().string() + " -L 30 --lambda 20 --out " + path("f.flni").string());
  EXPECT_EQ(f.rc, 1) << f.out;
}

TEST_F(Cli, Gas) {
  CliRun r = run("gas --bytes 1.2MiB");
  ASSERT_EQ(r.rc, 0);
  EXPECT_EQ(line_with(r.out, "gas "), "gas 50331640");
  EXPECT_EQ(line_with(r.out, "cost_usd"), "cost_usd 13.21");
  r = run("gas --bytes 320KiB");
  EXPECT_EQ(line_with(r.out, "gas "), "gas 13107200");
  EXPECT_EQ(line_with(r.out, "cost_usd"), "cost_usd 3.44");
  {
    std::ofstream z(path("zeros.bin"), std::ios::binary);
    const std::string data(1000, '\0');
    z.write(data.data(), 500);
    z.write("\x01\x02\x03", 3);
  }
  r = run("gas --file " + path("zeros.bin").string());
  EXPECT_EQ(line_with(r.out, "bytes "), "bytes 503");
  EXPECT_EQ(line_with(r.out, "nonzero_bytes"), "nonzero_bytes 3");
  EXPECT_EQ(line_with(r.out, "gas "), "gas 120");
}

TEST_F(Cli, BenchProofSizeCsv) {
  const CliRun r = run("bench proof-size --lengths 800,1600 --engine mock-sha --reps 3 --mode interactive,non-interactive "
                    "--style per-sample,cumulative -L 20 --lambda 10 --csv " + path("b.csv").string());
  ASSERT_EQ(r.rc, 0) << r.out;
  const auto rows = split(slurp(path("b.csv")), '\n');
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0],
            "chain_length,engine,mode,representation,variant,style,format,gzip_level,reps,accepted,mean_bytes,"
            "ci95_low,ci95_high,mean_headers,mean_nodes,mean_infos,mean_authroots,mean_totalwork,mean_heights");
  // 2 lengths x 2 modes x 2 styles x 4 representations.
  EXPECT_EQ(rows.size(), 1u + 2 * 2 * 2 * 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ',');
    ASSERT_EQ(f.size(), 19u) << rows[i];
    EXPECT_EQ(f[8], "3");
    EXPECT_EQ(f[9], "3") << rows[i];
    EXPECT_LE(std::stod(f[11]), std::stod(f[10]));
    EXPECT_GE(std::stod(f[12]), std::stod(f[10]));
  }
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  {
    std::ofstream cfg(path("cfg.toml"));
    cfg << "[verify]\nL = 2999\nlambda = 5\n";
  }
  const std::string base = "--config " + path("cfg.toml").string() + " verify --chain " + chain().string() + " --seed 1";
  const CliRun from_file = run(base);
  ASSERT_EQ(from_file.rc, 0) << from_file.out;
  EXPECT_NE(from_file.out.find("full-validation"), std::string::npos) << from_file.out;
  const CliRun flag = run(base + " -L 30");
  ASSERT_EQ(flag.rc, 0) << flag.out;
  EXPECT_NE(flag.out.find("n_det 30 "), std::string::npos) << flag.out;
  // lambda still comes from the file: 5 / -log2(1 - ln 0.5 / ln(31/3000)) = 21.08 -> 21 draws.
  EXPECT_NE(flag.out.find("n_prob 21"), std::string::npos) << flag.out;

  {
    std::ofstream cfg(path("bad.toml"));
    cfg << "[verify]\nvariant = \"cache-less\"\nmode = \"non-interactive\"\n";
  }
  EXPECT_NE(run("--config " + path("bad.toml").string() + " verify --chain " + chain().string()).rc, 0);
}

TEST_F(Cli, ServeAndVerifyOverHttp) {
  const std::string port_file = path("port").string();
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    ::execl(FLYCLIENT_CLI, FLYCLIENT_CLI, "prover", "serve", "--chain", chain().c_str(), "--listen",
            "127.0.0.1:0", "--port-file", port_file.c_str(), "--sync-mode", "during-sync",
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  std::string port;
  for (int i = 0; i < 600 && port.empty(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    port = slurp(port_file);
    while (!port.empty() && (port.back() == '\n' || port.back() == ' ')) port.pop_back();
  }
  ASSERT_FALSE(port.empty());
  const std::string ep = "127.0.0.1:" + port;
  CliRun r;
  for (int i = 0; i < 100; ++i) {
    r = run("verify --endpoint " + ep + " --manifest " + chain().string() + " -L 30 --lambda 20 --seed 2");
    if (r.rc != 2) break;  // still syncing
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  EXPECT_EQ(r.rc, 0) << r.out;
  const CliRun ni = run("prove-ni --endpoint " + ep + " --manifest " + chain().string() + " -L 30 --lambda 20 --out " +
                     path("http.flni").string());
  EXPECT_EQ(ni.rc, 0) << ni.out;
  EXPECT_EQ(run("verify-ni --proof " + path("http.flni").string() + " --manifest " + chain().string() +
                " -L 30 --lambda 20").rc,
            0);
  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_TRUE(std::filesystem::exists(chain() / "nodes.store"));
}
