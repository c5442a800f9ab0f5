#include "hpt/server.hpp"

#include "hpt/errors.hpp"
#include "hpt/stream_io.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace hpt {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

std::string error_line(std::string_view kind, std::string_view message) {
  return json{{"error", message}, {"kind", kind}}.dump();
}

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const auto n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

std::string handle_request_line(Tracker& tracker, std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    return error_line("parse", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) return error_line("parse", "frame is not a JSON object");
  try {
    FrameRecord f = frame_from_json(j);
    require_finite(f.pose, "pose");
    f.pose = normalize(f.pose);
    const StateVector s = tracker.push(f);
    OutputRecord out{f.t, s.pose, s.velocity, std::nullopt};
    return record_to_json(out).dump();
  } catch (const ParseError& e) {
    return error_line("parse", e.what());
  } catch (const ValueError& e) {
    return error_line("value", e.what());
  } catch (const OrderingError& e) {
    return error_line("ordering", e.what());
  } catch (const DegradedCovarianceError& e) {
    return error_line("degraded", e.what());
  }
}

FrameServer::FrameServer(RunConfig config, const std::string& host, int port) : config_(std::move(config)) {
  if (port < 0 || port > 65535) throw ValueError("port out of range: " + std::to_string(port));
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
    throw IoError("cannot resolve listen address '" + host + "': " + ::gai_strerror(rc));
  listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (listen_fd_ < 0) {
    ::freeaddrinfo(res);
    throw IoError(std::string("socket: ") + std::strerror(errno));
  }
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(listen_fd_, res->ai_addr, res->ai_addrlen) != 0 || ::listen(listen_fd_, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::freeaddrinfo(res);
    ::close(listen_fd_);
    throw IoError("cannot listen on " + host + ":" + std::to_string(port) + ": " + err);
  }
  ::freeaddrinfo(res);
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

FrameServer::~FrameServer() {
  stop();
  for (auto& w : workers_)
    if (w.joinable()) w.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void FrameServer::stop() {
  stopping_ = true;
  std::lock_guard lock(mutex_);
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
}

void FrameServer::run() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    clients_.insert(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

void FrameServer::serve_connection(int fd) {
  Tracker tracker(config_);
  std::string buffer;
  char chunk[4096];
  bool open = true;
  while (open) {
    const auto n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (auto nl = buffer.find('\n', start); nl != std::string::npos; nl = buffer.find('\n', start)) {
      std::string_view line(buffer.data() + start, nl - start);
      start = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      if (!send_all(fd, handle_request_line(tracker, line) + "\n")) {
        open = false;
        break;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLineBytes) {
      send_all(fd, error_line("parse", "request line exceeds 1 MiB") + "\n");
      buffer.clear();
    }
  }
  {
    std::lock_guard lock(mutex_);
    clients_.erase(fd);
  }
  ::close(fd);
}

}  // namespace hpt
