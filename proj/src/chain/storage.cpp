#include "flyclient/chain/storage.hpp"

#include <fstream>

#include "flyclient/core/error.hpp"
#include "flyclient/core/hash.hpp"

namespace flyclient {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kHeaderMagic[4] = {'F', 'L', 'Y', 'H'};
constexpr char kNodeMagic[4] = {'F', 'L', 'Y', 'M'};
constexpr std::uint32_t kFileVersion = 1;
constexpr std::size_t kHeaderFilePrefix = 24;
constexpr std::size_t kNodeFilePrefix = 32;

std::string branch_file(std::size_t k) { return "branch_" + std::to_string(k) + ".mmr"; }

std::size_t header_record_size(PowKind engine) {
  return 8 + 32 + 32 + kHeaderFixedSize + solution_size(engine);
}

json fork_to_json(const ForkInfo& f) {
  return {{"fork_height", f.fork_height},   {"valid_blocks", f.valid_blocks},
          {"invalid_blocks", f.invalid_blocks}, {"valid_work", u256_hex(f.valid_work)},
          {"work_budget", u256_hex(f.work_budget)}, {"validity_ratio", f.validity_ratio},
          {"seed", f.seed}};
}

ForkInfo fork_from_json(const json& j) {
  ForkInfo f;
  f.fork_height = j.at("fork_height").get<std::uint64_t>();
  f.valid_blocks = j.at("valid_blocks").get<std::uint64_t>();
  f.invalid_blocks = j.at("invalid_blocks").get<std::uint64_t>();
  f.valid_work = u256_from_hex(j.at("valid_work").get<std::string>());
  f.work_budget = u256_from_hex(j.at("work_budget").get<std::string>());
  f.validity_ratio = j.at("validity_ratio").get<double>();
  f.seed = j.at("seed").get<std::uint64_t>();
  return f;
}

Bytes header_file_bytes(const Chain& chain) {
  const std::size_t record = header_record_size(chain.consensus.engine);
  ByteWriter w(kHeaderFilePrefix + record * chain.length());
  w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t*>(kHeaderMagic), 4));
  w.u32le(kFileVersion);
  w.u8(static_cast<std::uint8_t>(chain.consensus.engine));
  w.u8(0);
  w.u8(0);
  w.u8(0);
  w.u32le(static_cast<std::uint32_t>(record));
  w.u64le(chain.length());
  for (std::uint64_t h = 0; h < chain.length(); ++h) {
    w.u64le(h);
    w.hash(chain.auth_roots[h]);
    w.hash(chain.hashes[h]);
    w.bytes(serialize_header(chain.headers[h]));
  }
  return w.take();
}

Bytes node_file_bytes(const ChainBranch& branch, NodeFormat format) {
  ByteWriter w(kNodeFilePrefix + kNodeRecordSize * branch.mmr.size());
  w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t*>(kNodeMagic), 4));
  w.u32le(kFileVersion);
  w.u32le(branch.branch_id);
  w.u8(static_cast<std::uint8_t>(format));
  w.u8(0);
  w.u8(0);
  w.u8(0);
  w.u64le(branch.start_height);
  w.u64le(branch.mmr.size());
  std::uint8_t record[kNodeRecordSize];
  for (const MmrNode& node : branch.mmr.nodes()) {
    write_node_record(node, record);
    w.bytes(ByteSpan(record, kNodeRecordSize));
  }
  return w.take();
}

json manifest_body(const Chain& chain, const Hash32& headers_digest) {
  json branches = json::array();
  for (std::size_t k = 0; k < chain.branches.size(); ++k) {
    const ChainBranch& b = chain.branches[k];
    branches.push_back({{"branch_id", b.branch_id},
                        {"start", b.start_height},
                        {"end", b.end_height},
                        {"leaf_count", b.mmr.leaf_count()},
                        {"node_count", b.mmr.size()},
                        {"file", branch_file(k)}});
  }
  json body = {{"format", "flyclient-chain"},
               {"version", kFileVersion},
               {"kind", chain.fork ? "fork" : "honest"},
               {"length", chain.length()},
               {"seed", chain.seed},
               {"consensus", consensus_to_json(chain.consensus)},
               {"branches", branches},
               {"tip_hash", chain.hashes.back().hex()},
               {"total_work", u256_hex(chain.cumulative_work.back())},
               {"headers_digest", headers_digest.hex()}};
  if (chain.fork) body["fork"] = fork_to_json(*chain.fork);
  return body;
}

Hash32 digest_of(const json& body) {
  const std::string text = body.dump();
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace

json consensus_to_json(const ConsensusParams& c) {
  json ids = json::array();
  for (std::uint32_t id : c.branch_ids) ids.push_back(id);
  return {{"engine", to_string(c.engine)},
          {"schedule",
           {{"kind", to_string(c.schedule.kind)},
            {"base_difficulty", static_cast<double>(c.schedule.base_difficulty)},
            {"growth", static_cast<double>(c.schedule.growth)},
            {"sigma", c.schedule.sigma},
            {"kappa", c.schedule.kappa},
            {"tau", c.schedule.tau}}},
          {"upgrade_heights", c.upgrade_heights},
          {"branch_ids", ids},
          {"difficulty_scale", u256_hex(c.difficulty_scale)}};
}

ConsensusParams consensus_from_json(const json& j) {
  ConsensusParams c;
  c.engine = pow_kind_from_string(j.at("engine").get<std::string>());
  const json& s = j.at("schedule");
  c.schedule.kind = schedule_kind_from_string(s.at("kind").get<std::string>());
  c.schedule.base_difficulty = s.at("base_difficulty").get<double>();
  c.schedule.growth = s.at("growth").get<double>();
  c.schedule.sigma = s.at("sigma").get<double>();
  c.schedule.kappa = s.at("kappa").get<double>();
  c.schedule.tau = s.at("tau").get<double>();
  c.upgrade_heights = j.at("upgrade_heights").get<std::vector<std::uint64_t>>();
  c.branch_ids = j.at("branch_ids").get<std::vector<std::uint32_t>>();
  c.difficulty_scale = u256_from_hex(j.at("difficulty_scale").get<std::string>());
  if (c.branch_ids.size() != c.upgrade_heights.size() + 1) {
    throw DecodeError("branch id count does not match upgrade heights");
  }
  return c;
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

void write_file(const fs::path& path, ByteSpan data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("short write to " + path.string());
}

Hash32 manifest_digest(const Chain& chain) {
  return digest_of(manifest_body(chain, sha256(header_file_bytes(chain))));
}

Hash32 save_chain(const Chain& chain, const fs::path& dir) {
  fs::create_directories(dir);
  const Bytes headers = header_file_bytes(chain);
  write_file(dir / "headers.bin", headers);
  for (std::size_t k = 0; k < chain.branches.size(); ++k) {
    write_file(dir / branch_file(k),
               node_file_bytes(chain.branches[k], chain.consensus.node_format()));
  }
  json body = manifest_body(chain, sha256(headers));
  const Hash32 digest = digest_of(body);
  body["manifest_digest"] = digest.hex();
  const std::string text = body.dump(2) + "\n";
  write_file(dir / "manifest.json",
             ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return digest;
}

Manifest read_manifest(const fs::path& dir) {
  const Bytes raw = read_file(dir / "manifest.json");
  json body;
  try {
    body = json::parse(raw.begin(), raw.end());
  } catch (const json::exception& e) {
    throw DecodeError(std::string("manifest.json: ") + e.what());
  }
  Manifest m;
  try {
    const std::string recorded = body.at("manifest_digest").get<std::string>();
    body.erase("manifest_digest");
    m.digest = digest_of(body);
    if (m.digest.hex() != recorded) throw DecodeError("manifest digest mismatch");
    m.consensus = consensus_from_json(body.at("consensus"));
    m.seed = body.at("seed").get<std::uint64_t>();
    m.length = body.at("length").get<std::uint64_t>();
    m.tip_hash = Hash32::from_hex(body.at("tip_hash").get<std::string>());
    m.headers_digest = Hash32::from_hex(body.at("headers_digest").get<std::string>());
    m.is_fork = body.at("kind").get<std::string>() == "fork";
  } catch (const json::exception& e) {
    throw DecodeError(std::string("manifest.json: ") + e.what());
  }
  m.body = std::move(body);
  return m;
}

HeaderRecords read_header_records(const fs::path& dir, const Manifest& manifest) {
  const Bytes raw = read_file(dir / "headers.bin");
  if (sha256(raw) != manifest.headers_digest) {
    throw DecodeError("headers.bin does not match the manifest digest");
  }
  ByteReader r(raw);
  const ByteSpan magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kHeaderMagic)) throw DecodeError("bad headers.bin magic");
  if (r.u32le() != kFileVersion) throw DecodeError("unsupported headers.bin version");
  const auto engine = static_cast<PowKind>(r.u8());
  r.bytes(3);
  const std::uint32_t record = r.u32le();
  const std::uint64_t count = r.u64le();
  if (engine != manifest.consensus.engine || record != header_record_size(engine)) {
    throw DecodeError("headers.bin record layout disagrees with the manifest");
  }
  if (count != manifest.length || r.remaining() != count * record) {
    throw DecodeError("headers.bin holds " + std::to_string(r.remaining() / record) +
                      " records, manifest declares " + std::to_string(manifest.length));
  }
  HeaderRecords out;
  out.headers.reserve(count);
  for (std::uint64_t h = 0; h < count; ++h) {
    auto fail = [h](const std::string& why) {
      return DecodeError("corrupt header record at height " + std::to_string(h) + ": " + why);
    };
    const std::uint64_t height = r.u64le();
    if (height != h) throw fail("record claims height " + std::to_string(height));
    const Hash32 auth = r.hash();
    const Hash32 hash = r.hash();
    Header header;
    try {
      header = deserialize_header(r.bytes(record - 72), h);
    } catch (const DecodeError& e) {
      throw fail(e.what());
    }
    if (header.solution.size() != solution_size(engine)) throw fail("wrong solution size");
    if (header_hash(header) != hash) throw fail("header hash mismatch");
    const Hash32 expected_prev = h == 0 ? Hash32{} : out.hashes.back();
    if (header.prev_hash != expected_prev) throw fail("previous hash does not link");
    if (h == 0 && !auth.is_zero()) throw fail("genesis auth data root must be zero");
    out.headers.push_back(std::move(header));
    out.hashes.push_back(hash);
    out.auth_roots.push_back(auth);
  }
  if (!out.hashes.empty() && out.hashes.back() != manifest.tip_hash) {
    throw DecodeError("tip hash disagrees with the manifest");
  }
  return out;
}

Chain load_chain(const fs::path& dir, const LoadOptions& options) {
  const Manifest manifest = read_manifest(dir);
  HeaderRecords records = read_header_records(dir, manifest);
  Chain chain;
  chain.consensus = manifest.consensus;
  chain.seed = manifest.seed;
  chain.headers = std::move(records.headers);
  chain.hashes = std::move(records.hashes);
  chain.auth_roots = std::move(records.auth_roots);
  if (manifest.body.contains("fork")) chain.fork = fork_from_json(manifest.body.at("fork"));

  if (options.check_pow && !manifest.is_fork) {
    const std::vector<std::uint8_t> ok = check_pow(chain.consensus, chain.headers, options.kernel);
    for (std::size_t h = 0; h < ok.size(); ++h) {
      if (!ok[h]) throw DecodeError("invalid proof of work at height " + std::to_string(h));
    }
  }

  chain.cumulative_work.reserve(chain.length());
  for (std::uint64_t h = 0; h < chain.length(); ++h) {
    const U256 w = work_from_bits(chain.headers[h].bits);
    chain.cumulative_work.push_back(h == 0 ? w : chain.cumulative_work.back() + w);
  }

  const json& table = manifest.body.at("branches");
  if (table.size() != chain.consensus.branch_count()) {
    throw DecodeError("branch table disagrees with upgrade heights");
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    ChainBranch b;
    b.branch_id = chain.consensus.branch_ids[k];
    b.start_height = table[k].at("start").get<std::uint64_t>();
    b.end_height = table[k].at("end").get<std::uint64_t>();
    if (b.start_height != chain.consensus.branch_start(k)) {
      throw DecodeError("branch " + std::to_string(k) + " start disagrees with upgrade heights");
    }
    const std::uint64_t covered = std::min(b.end_height, chain.tip_height());
    std::vector<LeafMeta> leaves;
    for (std::uint64_t h = b.start_height; h < covered; ++h) leaves.push_back(chain.leaf_meta(h));
    b.mmr = build_mmr(leaves, chain.consensus.node_context(k), b.start_height, options.kernel);

    const Bytes raw = read_file(dir / branch_file(k));
    ByteReader r(raw);
    const ByteSpan magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kNodeMagic)) {
      throw DecodeError(branch_file(k) + ": bad magic");
    }
    if (r.u32le() != kFileVersion) throw DecodeError(branch_file(k) + ": unsupported version");
    if (r.u32le() != b.branch_id) throw DecodeError(branch_file(k) + ": branch id mismatch");
    if (r.u8() != static_cast<std::uint8_t>(chain.consensus.node_format())) {
      throw DecodeError(branch_file(k) + ": node format mismatch");
    }
    r.bytes(3);
    if (r.u64le() != b.start_height) throw DecodeError(branch_file(k) + ": start height mismatch");
    const std::uint64_t count = r.u64le();
    if (count != b.mmr.size() || r.remaining() != count * kNodeRecordSize) {
      throw DecodeError(branch_file(k) + ": holds " + std::to_string(count) + " nodes, headers imply " +
                        std::to_string(b.mmr.size()));
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      if (read_node_record(r.bytes(kNodeRecordSize)) != b.mmr.node(i)) {
        throw DecodeError(branch_file(k) + ": node " + std::to_string(i) +
                          " disagrees with the headers");
      }
    }
    chain.branches.push_back(std::move(b));
  }

  for (std::uint64_t h = 0; h < chain.length(); ++h) {
    const Hash32 history = chain.expected_history_root(h);
    const Hash32 expected = chain.consensus.engine == PowKind::kEthashStub
                                ? history
                                : commit_block(chain.auth_roots[h], history);
    if (chain.headers[h].block_commitments != expected) {
      throw DecodeError("corrupt header record at height " + std::to_string(h) +
                        ": block commitments do not match the history");
    }
  }
  return chain;
}

}  // namespace flyclient
