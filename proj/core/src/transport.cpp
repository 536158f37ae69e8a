#include "css/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "css/error.hpp"

namespace css {
namespace {

struct Pipe {
  std::mutex mutex;
  std::condition_variable ready;
  std::deque<std::string> lines;
  bool closed = false;
};

class LoopbackChannel final : public LineChannel {
 public:
  LoopbackChannel(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~LoopbackChannel() override { close(); }

  void send(const std::string& line) override {
    std::lock_guard lock(out_->mutex);
    if (out_->closed) throw Error(ErrorCode::ConnectionLost, "loopback channel closed");
    std::string copy = line;
    if (!copy.empty() && copy.back() == '\n') copy.pop_back();
    out_->lines.push_back(std::move(copy));
    out_->ready.notify_one();
  }

  std::optional<std::string> receive() override {
    std::unique_lock lock(in_->mutex);
    in_->ready.wait(lock, [this] { return in_->closed || !in_->lines.empty(); });
    if (in_->lines.empty()) return std::nullopt;
    std::string line = std::move(in_->lines.front());
    in_->lines.pop_front();
    return line;
  }

  void close() override {
    for (auto* pipe : {in_.get(), out_.get()}) {
      std::lock_guard lock(pipe->mutex);
      pipe->closed = true;
      pipe->ready.notify_all();
    }
  }

 private:
  std::shared_ptr<Pipe> in_;
  std::shared_ptr<Pipe> out_;
};

class TcpChannel final : public LineChannel {
 public:
  explicit TcpChannel(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  }
  ~TcpChannel() override {
    close();
    ::close(fd_);
  }

  void send(const std::string& line) override {
    std::string data = line;
    if (data.empty() || data.back() != '\n') data.push_back('\n');
    std::lock_guard lock(send_mutex_);
    std::size_t sent = 0;
    while (sent < data.size()) {
      ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw Error(ErrorCode::ConnectionLost, "tcp send failed");
      sent += static_cast<std::size_t>(n);
    }
  }

  std::optional<std::string> receive() override {
    for (;;) {
      auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[4096];
      ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return std::nullopt;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  void close() override {
    if (!closed_.exchange(true)) ::shutdown(fd_, SHUT_RDWR);
  }

 private:
  int fd_;
  std::mutex send_mutex_;
  std::string buffer_;
  std::atomic<bool> closed_{false};
};

sockaddr_in resolve(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  std::string host = endpoint.host.empty() || endpoint.host == "localhost" ? "127.0.0.1" : endpoint.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* found = nullptr;
    if (::getaddrinfo(host.c_str(), nullptr, &hints, &found) != 0 || !found) {
      throw Error(ErrorCode::ConnectionLost, "cannot resolve host '" + endpoint.host + "'");
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(found->ai_addr)->sin_addr;
    ::freeaddrinfo(found);
  }
  return addr;
}

}  // namespace

std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>> make_loopback_pair() {
  auto a_to_b = std::make_shared<Pipe>();
  auto b_to_a = std::make_shared<Pipe>();
  return {std::make_unique<LoopbackChannel>(b_to_a, a_to_b),
          std::make_unique<LoopbackChannel>(a_to_b, b_to_a)};
}

Endpoint Endpoint::parse(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ParseError(0, "endpoint must be host:port, got '" + text + "'");
  Endpoint ep;
  if (colon > 0) ep.host = text.substr(0, colon);
  std::string port = text.substr(colon + 1);
  if (port.empty() || port.size() > 5 || port.find_first_not_of("0123456789") != std::string::npos ||
      std::stoul(port) > 65535) {
    throw ParseError(colon + 1, "invalid port in endpoint '" + text + "'");
  }
  ep.port = static_cast<std::uint16_t>(std::stoul(port));
  return ep;
}

TcpListener::TcpListener(const Endpoint& endpoint) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error(ErrorCode::BindFailure, "cannot create socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  try {
    addr = resolve(endpoint);
  } catch (const Error& e) {
    ::close(fd_);
    throw Error(ErrorCode::BindFailure, e.what());
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 64) != 0) {
    std::string why = std::strerror(errno);
    ::close(fd_);
    throw Error(ErrorCode::BindFailure, "cannot bind " + endpoint.to_string() + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  close();
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<LineChannel> TcpListener::accept() {
  for (;;) {
    int client = ::accept(fd_, nullptr, nullptr);
    if (client >= 0) return std::make_unique<TcpChannel>(client);
    if (errno == EINTR) continue;
    return nullptr;
  }
}

void TcpListener::close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::unique_ptr<LineChannel> connect_tcp(const Endpoint& endpoint) {
  sockaddr_in addr = resolve(endpoint);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(ErrorCode::ConnectionLost, "cannot create socket");
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    std::string why = std::strerror(errno);
    ::close(fd);
    throw Error(ErrorCode::ConnectionLost, "cannot connect to " + endpoint.to_string() + ": " + why);
  }
  return std::make_unique<TcpChannel>(fd);
}

}  // namespace css
