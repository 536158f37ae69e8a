#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "css/protocol.hpp"
#include "css/skill_runtime.hpp"
#include "css/state_machine.hpp"
#include "css/transport.hpp"

namespace css {

/// Protocol client with a background receiver. Responses are matched by
/// correlationId; events are queued in arrival order.
class SkillClient {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{5000};

  explicit SkillClient(std::unique_ptr<LineChannel> channel,
                       std::chrono::milliseconds timeout = kDefaultTimeout);
  ~SkillClient();

  SkillClient(const SkillClient&) = delete;
  SkillClient& operator=(const SkillClient&) = delete;

  /// Sends a request and waits for its result or error message. Throws
  /// Timeout or ConnectionLost; never throws RemoteError.
  Message exchange(MessageKind kind, json payload,
                   std::optional<std::chrono::milliseconds> timeout = std::nullopt);

  /// As exchange() but returns the result payload and throws RemoteError on
  /// an error response.
  json invoke(MessageKind kind, json payload,
              std::optional<std::chrono::milliseconds> timeout = std::nullopt);

  json hello(const std::string& clientName = "css-client");
  json list_skills();
  json describe(const std::string& localRuntimeId);
  json read(const std::string& localRuntimeId);
  void write(const std::string& localRuntimeId, const ParameterMap& values);
  State command(const std::string& localRuntimeId, Command command);
  FeasibilityResult feasibility(const std::string& localRuntimeId, const ParameterMap& inputs);
  /// Returns the skill state at subscription time.
  State subscribe(const std::string& localRuntimeId, bool active = true);

  /// Next queued event, waiting up to `timeout`.
  std::optional<Message> next_event(std::chrono::milliseconds timeout);

  bool connected() const;
  void close();

 private:
  void receive_loop();

  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex mutex_;
  std::condition_variable events_ready_;
  std::map<std::string, std::promise<Message>> pending_;
  std::deque<Message> events_;
  std::uint64_t next_id_ = 1;
  bool connected_ = true;
  std::thread receiver_;
};

/// TCP connection plus hello handshake.
std::unique_ptr<SkillClient> connect_client(const Endpoint& endpoint,
                                            std::chrono::milliseconds timeout = SkillClient::kDefaultTimeout);

}  // namespace css
