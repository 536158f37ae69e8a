#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "css/protocol.hpp"
#include "css/skill_runtime.hpp"
#include "css/transport.hpp"

namespace css {

/// Serves one SkillHost over any number of line channels. Each connection
/// gets its own session: requests are answered in order, events flow only
/// for skills the connection subscribed to, and event seq numbers are per
/// connection.
class SkillServer {
 public:
  explicit SkillServer(SkillHost& host, std::string serverName = {});
  ~SkillServer();

  SkillServer(const SkillServer&) = delete;
  SkillServer& operator=(const SkillServer&) = delete;

  /// Starts accepting TCP connections. Throws BindFailure.
  void listen(const Endpoint& endpoint);
  std::uint16_t port() const noexcept { return port_; }

  /// Serves an already established channel (e.g. the server end of a loopback pair).
  void attach(std::unique_ptr<LineChannel> channel);
  /// In-process transport: returns the client end of a fresh loopback pair.
  std::unique_ptr<LineChannel> connect_in_process();

  /// Closes the listener and every session; idempotent.
  void stop();

  /// Handles one decoded request outside any connection context (no
  /// subscriptions); exposed for testing the dispatcher.
  Message handle_stateless(const Message& request);

  class Session;

 private:
  SkillHost& host_;
  std::string server_name_;
  std::unique_ptr<TcpListener> listener_;
  std::thread accept_thread_;
  std::uint16_t port_ = 0;
  std::mutex sessions_mutex_;
  std::vector<std::shared_ptr<Session>> sessions_;
  std::atomic<bool> stopped_{false};
};

/// serve(host, endpoint): bind and start serving. Throws BindFailure.
std::unique_ptr<SkillServer> serve(SkillHost& host, const Endpoint& endpoint);

}  // namespace css
