#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "flyclient/chain/storage.hpp"
#include "flyclient/core/error.hpp"
#include "flyclient/prover/client.hpp"
#include "flyclient/prover/http.hpp"
#include "flyclient/prover/service.hpp"
#include "flyclient/prover/store.hpp"
#include "support.hpp"

using namespace flyclient;
using nlohmann::json;

namespace {

std::shared_ptr<const Chain> shared_chain(std::uint64_t length, std::uint64_t seed,
                                          PowKind engine = PowKind::kMockSha,
                                          std::vector<std::uint64_t> upgrades = {}) {
  return std::make_shared<const Chain>(
      flytest::small_chain(length, seed, engine, ScheduleKind::kFixed, std::move(upgrades)));
}

json rpc(const ProverService& service, const json& request) {
  return json::parse(service.handle_jsonrpc(request.dump()));
}

json call(const ProverService& service, const std::string& method, const json& params) {
  return rpc(service, {{"jsonrpc", "2.0"}, {"id", 7}, {"method", method}, {"params", params}});
}

int error_code(const json& resp) { return resp.at("error").at("code").get<int>(); }

// Every node of every branch, straight from the chain's MMRs.
void expect_store_matches(const NodeStore& store, const Chain& chain) {
  ASSERT_EQ(store.branches().size(), chain.branches.size());
  for (std::size_t k = 0; k < chain.branches.size(); ++k) {
    const ChainBranch& b = chain.branches[k];
    ASSERT_EQ(store.node_count(b.branch_id), b.mmr.size());
    for (std::uint64_t i = 0; i < b.mmr.size(); ++i) {
      ASSERT_EQ(store.node(b.branch_id, i), b.mmr.node(i)) << "branch " << k << " index " << i;
    }
  }
}

}  // namespace

TEST(Store, SyncModesWriteIdenticalBytes) {
  for (PowKind engine : {PowKind::kMockSha, PowKind::kEquihashStub, PowKind::kEthashStub}) {
    flytest::TempDir dir("store");
    const Chain chain = flytest::small_chain(700, 3, engine, ScheduleKind::kFixed, {150, 151, 400});
    const Hash32 digest = save_chain(chain, dir / "chain");

    const NodeStore during = sync_store(dir / "chain", SyncMode::kDuringSync, dir / "during.store");
    const NodeStore posthoc = sync_store(dir / "chain", SyncMode::kPostHoc, dir / "posthoc.store");
    EXPECT_EQ(read_file(dir / "during.store"), read_file(dir / "posthoc.store"));
    EXPECT_EQ(during.manifest_digest(), digest);
    EXPECT_EQ(posthoc.manifest_digest(), digest);
    expect_store_matches(during, chain);
    expect_store_matches(posthoc, chain);

    const NodeStore reopened = NodeStore::open(dir / "during.store");
    EXPECT_EQ(reopened.manifest_digest(), digest);
    EXPECT_EQ(reopened.branches(), during.branches());
    expect_store_matches(reopened, chain);
  }
}

TEST(Store, InMemorySyncMatchesDirectorySync) {
  flytest::TempDir dir("store");
  const Chain chain = flytest::small_chain(300, 8);
  save_chain(chain, dir / "chain");
  sync_store(dir / "chain", SyncMode::kDuringSync, dir / "a.store");
  sync_store(chain, SyncMode::kPostHoc, dir / "b.store");
  EXPECT_EQ(read_file(dir / "a.store"), read_file(dir / "b.store"));
}

TEST(Store, UnknownItemsAreNotFound) {
  flytest::TempDir dir("store");
  const Chain chain = flytest::small_chain(50, 1);
  const NodeStore store = sync_store(chain, SyncMode::kDuringSync, dir / "s.store");
  const std::uint32_t id = chain.branches[0].branch_id;
  EXPECT_THROW(store.node(id, store.node_count(id)), NotFoundError);
  EXPECT_THROW(store.node(id + 12345, 0), NotFoundError);
}

TEST(Store, CorruptOrUnfinishedLogsAreRejected) {
  flytest::TempDir dir("store");
  const Chain chain = flytest::small_chain(120, 2);
  sync_store(chain, SyncMode::kDuringSync, dir / "s.store");
  const Bytes good = read_file(dir / "s.store");

  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{8}, good.size() / 2, good.size() - 1}) {
    write_file(dir / "t.store", ByteSpan(good.data(), cut));
    EXPECT_THROW(NodeStore::open(dir / "t.store"), DecodeError) << "cut " << cut;
  }
  Bytes bad_magic = good;
  bad_magic[0] ^= 0xFF;
  write_file(dir / "t.store", bad_magic);
  EXPECT_THROW(NodeStore::open(dir / "t.store"), DecodeError);
  EXPECT_THROW(NodeStore::open(dir / "missing.store"), Error);
}

TEST(Store, WriterEnforcesIndexOrder) {
  flytest::TempDir dir("store");
  const Chain chain = flytest::small_chain(20, 4);
  const ChainBranch& b = chain.branches[0];
  StoreWriter writer(dir / "w.store", {{b.branch_id, b.start_height, b.mmr.leaf_count()}});
  writer.append(b.branch_id, 0, b.mmr.node(0));
  EXPECT_THROW(writer.append(b.branch_id, 2, b.mmr.node(2)), ContractError);
}

TEST(Service, AttachRejectsStoreFromAnotherChain) {
  flytest::TempDir dir("svc");
  const auto a = shared_chain(200, 1);
  const auto b = shared_chain(200, 2);
  auto store_b = std::make_shared<const NodeStore>(sync_store(*b, SyncMode::kDuringSync, dir / "b.store"));
  ProverService service(a);
  EXPECT_THROW(service.attach_store(store_b), ContractError);
  EXPECT_FALSE(service.synced());
  auto store_a = std::make_shared<const NodeStore>(sync_store(*a, SyncMode::kPostHoc, dir / "a.store"));
  service.attach_store(store_a);
  EXPECT_TRUE(service.synced());
}

TEST(Service, WarmupBeforeStoreAttach) {
  flytest::TempDir dir("svc");
  const auto chain = shared_chain(100, 5);
  ProverService service(chain);
  EXPECT_THROW(service.get_blockchain_info(), ServiceUnavailableError);
  EXPECT_THROW(service.get_block_header(3), ServiceUnavailableError);
  for (const auto& [method, params] :
       std::vector<std::pair<std::string, json>>{{"getblockchaininfo", json::array()},
                                                 {"getblockheader", {3}},
                                                 {"gethistorynode", {chain->branches[0].branch_id, 0}},
                                                 {"getauthdataroot", {3}},
                                                 {"gettotalwork", {3}},
                                                 {"getheightwithtotalwork", {"0x1"}}}) {
    EXPECT_EQ(error_code(call(service, method, params)), kRpcInWarmup) << method;
  }
  service.attach_store(
      std::make_shared<const NodeStore>(sync_store(*chain, SyncMode::kDuringSync, dir / "s.store")));
  EXPECT_TRUE(call(service, "getblockchaininfo", json::array()).contains("result"));
}

TEST(Service, TypedAnswersMatchChain) {
  const auto chain = shared_chain(400, 6, PowKind::kEquihashStub, {100, 250});
  const auto service = make_local_prover(chain);
  const BlockchainInfo info = service->get_blockchain_info();
  EXPECT_EQ(info.block_count, 400u);
  EXPECT_EQ(info.total_work, chain->total_work(399));
  EXPECT_EQ(std::get<Header>(info.tip), chain->tip());
  EXPECT_THROW(service->get_blockchain_info(ProofFormat::kDistilled), FormatError);
  for (std::uint64_t h = 0; h < 400; h += 37) {
    EXPECT_EQ(std::get<Header>(service->get_block_header(h)), chain->header(h));
    EXPECT_EQ(service->get_auth_data_root(h), chain->auth_roots[h]);
    EXPECT_EQ(service->get_total_work(h), chain->total_work(h));
    EXPECT_EQ(service->get_height_with_total_work(chain->total_work(h)), h);
  }
  for (const ChainBranch& b : chain->branches) {
    EXPECT_EQ(service->get_history_node(b.branch_id, b.mmr.size() - 1), b.mmr.node(b.mmr.size() - 1));
  }
  EXPECT_THROW(service->get_block_header(400), NotFoundError);
  EXPECT_THROW(service->get_history_node(chain->branches[0].branch_id, 1u << 30), NotFoundError);
}

TEST(JsonRpc, ProtocolErrors) {
  const auto service = make_local_prover(shared_chain(60, 7));
  EXPECT_EQ(error_code(json::parse(service->handle_jsonrpc("{not json"))), kRpcParseError);
  EXPECT_EQ(error_code(json::parse(service->handle_jsonrpc("[1,2]"))), kRpcInvalidRequest);
  EXPECT_EQ(error_code(rpc(*service, {{"jsonrpc", "2.0"}, {"id", 1}, {"method", 5}})), kRpcInvalidRequest);
  EXPECT_EQ(error_code(call(*service, "getblock", json::array())), kRpcMethodNotFound);
  EXPECT_EQ(error_code(call(*service, "getblockheader", json::array())), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getblockheader", {-1})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getblockheader", {"3"})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getblockheader", {3, 2})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getblockheader", {3, 1, "yes"})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getheightwithtotalwork", {12})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getheightwithtotalwork", {"0xzz"})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "gethistorynode", {1ull << 33, 0})), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getblockheader", 5)), kRpcInvalidParams);
  EXPECT_EQ(error_code(call(*service, "getblockheader", {60})), kRpcNotFound);
  EXPECT_EQ(error_code(call(*service, "gethistorynode", {999, 0})), kRpcNotFound);

  const json resp = call(*service, "getblockheader", {60});
  EXPECT_EQ(resp.at("id"), 7);
  EXPECT_EQ(resp.at("jsonrpc"), "2.0");
  EXPECT_TRUE(resp.at("error").at("message").is_string());
}

TEST(JsonRpc, DistillingEquihashHeaderIsInvalidParameter) {
  const auto service = make_local_prover(shared_chain(30, 8, PowKind::kEquihashStub));
  EXPECT_EQ(error_code(call(*service, "getblockheader", {{"height", 3}, {"distilled", true}})),
            kRpcInvalidParameter);
  EXPECT_EQ(error_code(call(*service, "getblockchaininfo", {true})), kRpcInvalidParameter);

  const auto eth = shared_chain(30, 8, PowKind::kEthashStub);
  const json ok = call(*make_local_prover(eth), "getblockheader", {{"height", 3}, {"distilled", true}});
  EXPECT_EQ(ok.at("result"), view_to_json(distill(eth->header(3))));
}

TEST(JsonRpc, PositionalAndNamedParamsAgree) {
  const auto chain = shared_chain(200, 9, PowKind::kEthashStub, {80});
  const auto service = make_local_prover(chain);
  const std::uint32_t id = chain->branches[1].branch_id;
  const std::vector<std::tuple<std::string, json, json>> cases = {
      {"getblockheader", {17}, {{"height", 17}}},
      {"getblockheader", {17, 0}, {{"height", 17}, {"verbosity", 0}}},
      {"getblockheader", {17, 1, true}, {{"height", 17}, {"verbosity", 1}, {"distilled", true}}},
      {"gethistorynode", {id, 4}, {{"branch", id}, {"index", 4}}},
      {"gethistorynode", {id, 4, 0}, {{"branch", id}, {"index", 4}, {"verbosity", 0}}},
      {"getauthdataroot", {55}, {{"height", 55}}},
      {"gettotalwork", {55}, {{"height", 55}}},
      {"getblockchaininfo", {true}, {{"distilled", true}}},
  };
  for (const auto& [method, positional, named] : cases) {
    const json a = call(*service, method, positional);
    const json b = call(*service, method, named);
    ASSERT_TRUE(a.contains("result")) << method << " " << a.dump();
    EXPECT_EQ(a.at("result"), b.at("result")) << method;
  }
}

TEST(JsonRpc, VerbosityAndEncodings) {
  const auto chain = shared_chain(200, 10, PowKind::kEquihashStub, {80});
  const auto service = make_local_prover(chain);
  const Header& h = chain->header(90);

  const json hex = call(*service, "getblockheader", {90, 0}).at("result");
  EXPECT_EQ(hex.get<std::string>(), to_hex(view_bytes(h)));
  EXPECT_EQ(hex.get<std::string>().size(), 2 * 1487u);
  const json obj = call(*service, "getblockheader", {90}).at("result");
  EXPECT_EQ(header_from_json(obj), h);

  const MmrNode& node = chain->branches[1].mmr.node(5);
  const json nhex = call(*service, "gethistorynode", {chain->branches[1].branch_id, 5, 0}).at("result");
  EXPECT_EQ(nhex.get<std::string>(), to_hex(serialize_node(node, NodeFormat::kZcash)));
  const json nobj = call(*service, "gethistorynode", {chain->branches[1].branch_id, 5}).at("result");
  EXPECT_EQ(node_from_json(nobj, NodeFormat::kZcash), node);

  EXPECT_EQ(call(*service, "getauthdataroot", {90}).at("result"), chain->auth_roots[90].hex());
  EXPECT_EQ(call(*service, "gettotalwork", {90}).at("result"), u256_hex(chain->total_work(90)));
  EXPECT_EQ(call(*service, "getheightwithtotalwork", {u256_hex(chain->total_work(90))}).at("result"), 90);
  const json info = call(*service, "getblockchaininfo", json::array()).at("result");
  EXPECT_EQ(info.at("blocks"), 200);
  EXPECT_EQ(info.at("chainwork"), u256_hex(chain->total_work(199)));
}

TEST(JsonRpc, DefaultFormatAppliesWhenDistilledIsOmitted) {
  const auto chain = shared_chain(100, 11, PowKind::kEthashStub);
  auto service = make_local_prover(chain);
  const json normal = call(*service, "getblockheader", {40, 0}).at("result");
  service->set_default_format(ProofFormat::kDistilled);
  const json distilled = call(*service, "getblockheader", {40, 0}).at("result");
  EXPECT_EQ(distilled.get<std::string>(), to_hex(view_bytes(distill(chain->header(40)))));
  EXPECT_EQ(call(*service, "getblockheader", {40, 0, false}).at("result"), normal);
  EXPECT_EQ(normal.get<std::string>().size(), 2 * 175u);
  EXPECT_EQ(distilled.get<std::string>().size(), 2 * 104u);
}

TEST(JsonRpc, IdIsEchoed) {
  const auto service = make_local_prover(shared_chain(10, 12));
  for (const json& id : {json("abc"), json(42), json(nullptr)}) {
    const json resp =
        rpc(*service, {{"jsonrpc", "2.0"}, {"id", id}, {"method", "gettotalwork"}, {"params", {1}}});
    EXPECT_EQ(resp.at("id"), id);
  }
}

TEST(Client, LoopbackMatchesLocal) {
  const auto chain = shared_chain(300, 13, PowKind::kEthashStub, {120});
  const auto service = make_local_prover(chain);
  LocalClient local(service);
  JsonRpcClient remote(loopback_transport(service), NodeFormat::kDistilled);
  for (ProofFormat f : {ProofFormat::kNormal, ProofFormat::kDistilled}) {
    const BlockchainInfo a = local.get_blockchain_info(f);
    const BlockchainInfo b = remote.get_blockchain_info(f);
    EXPECT_EQ(a.block_count, b.block_count);
    EXPECT_EQ(a.total_work, b.total_work);
    EXPECT_EQ(a.tip, b.tip);
    for (std::uint64_t h = 121; h < 300; h += 29) {
      EXPECT_EQ(local.get_block_header(h, f), remote.get_block_header(h, f));
    }
  }
  for (std::uint64_t h = 0; h < 300; h += 31) {
    EXPECT_EQ(local.get_auth_data_root(h), remote.get_auth_data_root(h));
    EXPECT_EQ(local.get_total_work(h), remote.get_total_work(h));
    EXPECT_EQ(remote.get_height_with_total_work(local.get_total_work(h)), h);
  }
  for (const ChainBranch& b : chain->branches) {
    for (std::uint64_t i = 0; i < b.mmr.size(); i += 17) {
      EXPECT_EQ(local.get_history_node(b.branch_id, i), remote.get_history_node(b.branch_id, i));
    }
  }
}

TEST(Client, ErrorMapping) {
  const auto chain = shared_chain(40, 14);
  auto unsynced = std::make_shared<ProverService>(chain);
  JsonRpcClient warm(loopback_transport(unsynced), NodeFormat::kZcash);
  EXPECT_THROW(warm.get_blockchain_info(ProofFormat::kNormal), ServiceUnavailableError);

  JsonRpcClient client(loopback_transport(make_local_prover(chain)), NodeFormat::kZcash);
  EXPECT_THROW(client.get_block_header(40, ProofFormat::kNormal), NotFoundError);
  EXPECT_THROW(client.get_history_node(77, 0), NotFoundError);

  auto canned = [](std::string body) { return [body](const std::string&) { return body; }; };
  EXPECT_THROW(JsonRpcClient(canned("garbage"), NodeFormat::kZcash).get_total_work(1), DecodeError);
  EXPECT_THROW(JsonRpcClient(canned("[]"), NodeFormat::kZcash).get_total_work(1), DecodeError);
  EXPECT_THROW(JsonRpcClient(canned(R"({"jsonrpc":"2.0","id":1})"), NodeFormat::kZcash).get_total_work(1),
               DecodeError);
  EXPECT_THROW(
      JsonRpcClient(canned(R"({"jsonrpc":"2.0","id":99,"result":"0x1"})"), NodeFormat::kZcash).get_total_work(1),
      DecodeError);
  EXPECT_THROW(
      JsonRpcClient(canned(R"({"jsonrpc":"2.0","id":1,"result":5})"), NodeFormat::kZcash).get_total_work(1),
      DecodeError);
  EXPECT_THROW(JsonRpcClient(canned(R"({"jsonrpc":"2.0","id":1,"result":"00ff"})"), NodeFormat::kZcash)
                   .get_block_header(1, ProofFormat::kNormal),
               DecodeError);
  EXPECT_THROW(
      JsonRpcClient(canned(R"({"jsonrpc":"2.0","id":1,"error":{"code":-32603,"message":"x"}})"),
                    NodeFormat::kZcash)
          .get_total_work(1),
      Error);
  auto failing = [](const std::string&) -> std::string { throw TransportError("down"); };
  EXPECT_THROW(JsonRpcClient(failing, NodeFormat::kZcash).get_total_work(1), TransportError);
}

TEST(Client, RecordingAndBundleReplay) {
  const auto chain = shared_chain(150, 15, PowKind::kEquihashStub);
  const auto service = make_local_prover(chain);
  LocalClient local(service);
  RecordingClient rec(local, ProofFormat::kNormal, NodeFormat::kZcash);
  rec.get_blockchain_info(ProofFormat::kNormal);
  rec.get_block_header(10, ProofFormat::kNormal);
  rec.get_block_header(10, ProofFormat::kNormal);
  rec.get_history_node(chain->branches[0].branch_id, 3);
  rec.get_total_work(20);
  rec.get_auth_data_root(20);
  rec.get_height_with_total_work(chain->total_work(30));
  EXPECT_EQ(rec.entries().size(), 6u);

  NiProof proof;
  proof.format = ProofFormat::kNormal;
  proof.node_format = NodeFormat::kZcash;
  proof.entries = rec.entries();
  BundleClient bundle(proof);
  EXPECT_EQ(bundle.unused_entries(), 6u);
  EXPECT_EQ(std::get<Header>(bundle.get_block_header(10, ProofFormat::kNormal)), chain->header(10));
  EXPECT_EQ(bundle.get_history_node(chain->branches[0].branch_id, 3), chain->branches[0].mmr.node(3));
  EXPECT_EQ(bundle.get_total_work(20), chain->total_work(20));
  EXPECT_EQ(bundle.get_auth_data_root(20), chain->auth_roots[20]);
  EXPECT_EQ(bundle.get_height_with_total_work(chain->total_work(30)), 30u);
  EXPECT_EQ(bundle.get_blockchain_info(ProofFormat::kNormal).block_count, 150u);
  EXPECT_EQ(bundle.unused_entries(), 0u);
  EXPECT_THROW(bundle.get_block_header(11, ProofFormat::kNormal), NotFoundError);
  EXPECT_THROW(bundle.get_block_header(10, ProofFormat::kDistilled), FormatError);

  proof.entries.push_back(proof.entries[1]);
  EXPECT_THROW(BundleClient{proof}, DecodeError);
}

TEST(Http, ServesJsonRpcOverLoopbackSocket) {
  const auto chain = shared_chain(250, 16, PowKind::kEthashStub, {100});
  const auto service = make_local_prover(chain);
  HttpProverServer server(service, "127.0.0.1", 0);
  server.start();
  ASSERT_GT(server.port(), 0);
  const std::string endpoint = "127.0.0.1:" + std::to_string(server.port());
  JsonRpcClient http(http_transport(endpoint, 5), NodeFormat::kDistilled);
  JsonRpcClient loop(loopback_transport(service), NodeFormat::kDistilled);

  EXPECT_EQ(http.get_blockchain_info(ProofFormat::kNormal).tip, loop.get_blockchain_info(ProofFormat::kNormal).tip);
  EXPECT_EQ(http.get_block_header(120, ProofFormat::kDistilled),
            loop.get_block_header(120, ProofFormat::kDistilled));
  EXPECT_EQ(http.get_history_node(chain->branches[1].branch_id, 9),
            chain->branches[1].mmr.node(9));
  EXPECT_THROW(http.get_block_header(5000, ProofFormat::kNormal), NotFoundError);
  const json raw = http.request("gettotalwork", {3});
  EXPECT_EQ(raw, u256_hex(chain->total_work(3)));

  JsonRpcClient with_scheme(http_transport("http://" + endpoint, 5), NodeFormat::kDistilled);
  EXPECT_EQ(with_scheme.get_total_work(7), chain->total_work(7));

  server.stop();
  EXPECT_THROW(http.get_total_work(3), TransportError);
}

TEST(Http, ConcurrentClients) {
  const auto chain = shared_chain(200, 17);
  const auto service = make_local_prover(chain);
  HttpProverServer server(service, "127.0.0.1", 0);
  server.start();
  const std::string endpoint = "127.0.0.1:" + std::to_string(server.port());
  std::vector<std::thread> threads;
  std::vector<int> ok(4, 0);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      JsonRpcClient c(http_transport(endpoint, 5), NodeFormat::kZcash);
      for (std::uint64_t h = t; h < 200; h += 13) {
        if (c.get_total_work(h) == chain->total_work(h)) ++ok[t];
      }
    });
  }
  for (auto& th : threads) th.join();
  server.stop();
  for (int t = 0; t < 4; ++t) {
    int expected = 0;
    for (std::uint64_t h = t; h < 200; h += 13) ++expected;
    EXPECT_EQ(ok[t], expected);
  }
}

TEST(Http, UnreachableEndpointIsTransportError) {
  HttpProverServer probe(make_local_prover(shared_chain(5, 1)), "127.0.0.1", 0);
  probe.start();
  const int port = probe.port();
  probe.stop();
  JsonRpcClient c(http_transport("127.0.0.1:" + std::to_string(port), 1), NodeFormat::kZcash);
  EXPECT_THROW(c.get_blockchain_info(ProofFormat::kNormal), TransportError);
}
