#pragma once

// Newline-delimited JSON frame server. Each connection owns one Tracker;
// every request line gets exactly one reply line.
//   request: {"t": s, "pitch": deg, "yaw": deg, "roll": deg}
//   reply:   {"t": s, "pitch": deg, "yaw": deg, "roll": deg, "vp": deg/s, "vy": deg/s, "vr": deg/s}
//   error:   {"error": message, "kind": parse|value|ordering|degraded}

#include "hpt/config.hpp"
#include "hpt/tracker.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hpt {

// One protocol step: parse, push, format. Never throws for bad input.
std::string handle_request_line(Tracker& tracker, std::string_view line);

class FrameServer {
 public:
  // Binds and listens; port 0 picks an ephemeral port. Throws IoError.
  FrameServer(RunConfig config, const std::string& host, int port);
  ~FrameServer();
  FrameServer(const FrameServer&) = delete;
  FrameServer& operator=(const FrameServer&) = delete;

  int port() const { return port_; }

  // Accepts connections until stop(); joins connection handlers on return.
  void run();
  // Safe from any thread; closes the listener and open connections.
  void stop();

 private:
  void serve_connection(int fd);

  RunConfig config_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::set<int> clients_;
  std::vector<std::thread> workers_;
};

}  // namespace hpt
