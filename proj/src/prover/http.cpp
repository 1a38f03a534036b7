#include "flyclient/prover/http.hpp"

#include <httplib.h>

#include "flyclient/core/error.hpp"

namespace flyclient {

HttpProverServer::HttpProverServer(std::shared_ptr<const ProverService> service, std::string host,
                                   int port)
    : service_(std::move(service)), host_(std::move(host)), port_(port),
      server_(std::make_unique<httplib::Server>()) {
  server_->set_tcp_nodelay(true);
  server_->Post("/", [this](const httplib::Request& req, httplib::Response& res) {
    res.set_content(service_->handle_jsonrpc(req.body), "application/json");
  });
}

HttpProverServer::~HttpProverServer() { stop(); }

void HttpProverServer::bind() {
  if (port_ == 0) {
    port_ = server_->bind_to_any_port(host_);
    if (port_ < 0) throw TransportError("cannot bind " + host_);
  } else if (!server_->bind_to_port(host_, port_)) {
    throw TransportError("cannot bind " + host_ + ":" + std::to_string(port_));
  }
}

void HttpProverServer::start() {
  bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpProverServer::serve() {
  bind();
  server_->listen_after_bind();
}

void HttpProverServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

RpcTransport http_transport(const std::string& endpoint, int timeout_seconds) {
  std::string url = endpoint;
  if (url.rfind("http://", 0) != 0) url = "http://" + url;
  auto client = std::make_shared<httplib::Client>(url);
  client->set_connection_timeout(timeout_seconds, 0);
  client->set_read_timeout(timeout_seconds, 0);
  client->set_keep_alive(true);
  client->set_tcp_nodelay(true);
  return [client, endpoint](const std::string& body) {
    auto res = client->Post("/", body, "application/json");
    if (!res) {
      throw TransportError(endpoint + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw TransportError(endpoint + ": HTTP status " + std::to_string(res->status));
    }
    return res->body;
  };
}

}  // namespace flyclient
