#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace css {

/// Bidirectional stream of LF-terminated lines.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// Sends one line; a missing trailing LF is appended. Throws ConnectionLost.
  virtual void send(const std::string& line) = 0;
  /// Blocks for the next line (without its LF); nullopt once the peer closed.
  virtual std::optional<std::string> receive() = 0;
  /// Idempotent; unblocks pending receive() calls on both ends.
  virtual void close() = 0;
};

/// Two in-process channels wired to each other.
std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>> make_loopback_pair();

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "host:port" or ":port". Throws ParseError.
  static Endpoint parse(const std::string& text);
  std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// IPv4 TCP listening socket. Port 0 binds an ephemeral port.
class TcpListener {
 public:
  /// Throws BindFailure.
  explicit TcpListener(const Endpoint& endpoint);
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  /// Blocks for a connection; nullptr after close().
  std::unique_ptr<LineChannel> accept();
  void close();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Throws ConnectionLost when the endpoint cannot be reached.
std::unique_ptr<LineChannel> connect_tcp(const Endpoint& endpoint);

}  // namespace css
