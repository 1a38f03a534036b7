#pragma once

#include <memory>
#include <string>
#include <thread>

#include "flyclient/prover/client.hpp"

namespace httplib {
class Server;
}

namespace flyclient {

// JSON-RPC over HTTP POST on "/".
class HttpProverServer {
 public:
  HttpProverServer(std::shared_ptr<const ProverService> service, std::string host, int port);
  ~HttpProverServer();
  HttpProverServer(const HttpProverServer&) = delete;
  HttpProverServer& operator=(const HttpProverServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  void start();
  // Binds and serves on the calling thread until stop().
  void serve();
  void stop();
  int port() const { return port_; }

 private:
  void bind();

  std::shared_ptr<const ProverService> service_;
  std::string host_;
  int port_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// endpoint is "http://host:port" or "host:port".
RpcTransport http_transport(const std::string& endpoint, int timeout_seconds = 10);

}  // namespace flyclient
