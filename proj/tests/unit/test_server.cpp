#include "hpt/config.hpp"
#include "hpt/errors.hpp"
#include "hpt/pipeline.hpp"
#include "hpt/server.hpp"
#include "hpt/synth.hpp"

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>

namespace hpt {
namespace {

RunConfig defaults() { return build_run_config(ConfigDocument{}); }

using nlohmann::json;

// Minimal line-oriented TCP client.
class Client {
 public:
  explicit Client(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) throw IoError("connect failed");
  }
  ~Client() { ::close(fd_); }
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  void send(const std::string& line) {
    const std::string data = line + "\n";
    ASSERT_EQ(::send(fd_, data.data(), data.size(), MSG_NOSIGNAL), static_cast<ssize_t>(data.size()));
  }

  std::string read_line() {
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return {};
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  json request(const json& frame) {
    send(frame.dump());
    return json::parse(read_line());
  }

 private:
  int fd_ = -1;
  std::string buffer_;
};

class RunningServer {
 public:
  explicit RunningServer(RunConfig config = defaults()) : server_(std::move(config), "127.0.0.1", 0) {
    thread_ = std::thread([this] { server_.run(); });
  }
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }
  int port() const { return server_.port(); }

 private:
  FrameServer server_;
  std::thread thread_;
};

json frame_json(const FrameRecord& f) { return {{"t", f.t}, {"pitch", f.pose.pitch}, {"yaw", f.pose.yaw}, {"roll", f.pose.roll}}; }

TEST(HandleRequestLine, FirstFrameEchoesObservation) {
  Tracker tracker{defaults()};
  const auto reply = json::parse(handle_request_line(tracker, R"({"t":0,"pitch":10,"yaw":-20,"roll":5})"));
  EXPECT_EQ(reply["pitch"], 10.0);
  EXPECT_EQ(reply["yaw"], -20.0);
  EXPECT_EQ(reply["roll"], 5.0);
  EXPECT_EQ(reply["vy"], 0.0);
}

TEST(HandleRequestLine, ErrorsAreRepliesNotExceptions) {
  Tracker tracker{defaults()};
  EXPECT_EQ(json::parse(handle_request_line(tracker, "{oops"))["kind"], "parse");
  EXPECT_EQ(json::parse(handle_request_line(tracker, "[1,2]"))["kind"], "parse");
  EXPECT_EQ(json::parse(handle_request_line(tracker, R"({"t":0,"pitch":0,"yaw":0})"))["kind"], "parse");
  EXPECT_FALSE(json::parse(handle_request_line(tracker, R"({"t":1,"pitch":0,"yaw":0,"roll":0})")).contains("error"));
  EXPECT_EQ(json::parse(handle_request_line(tracker, R"({"t":0.5,"pitch":0,"yaw":0,"roll":0})"))["kind"], "ordering");
  EXPECT_FALSE(json::parse(handle_request_line(tracker, R"({"t":2,"pitch":0,"yaw":0,"roll":0})")).contains("error"));
}

TEST(FrameServer, MalformedLineGetsErrorAndBlankLinesAreSkipped) {
  RunningServer server;
  Client c(server.port());
  c.send("this is not json");
  EXPECT_EQ(json::parse(c.read_line())["kind"], "parse");
  const auto ok = c.request({{"t", 0.0}, {"pitch", 1.0}, {"yaw", 2.0}, {"roll", 3.0}});
  EXPECT_EQ(ok["yaw"], 2.0);
  // Blank lines get no reply.
  c.send("\r");
  c.send("");
  EXPECT_EQ(c.request({{"t", 0.1}, {"pitch", 1.0}, {"yaw", 2.0}, {"roll", 3.0}})["t"], 0.1);
}

TEST(FrameServer, RepliesMatchOfflinePipeline) {
  const auto frames = corrupt(gen_trajectory(benchmark_trajectory()),
                              NoiseSpec::from_profile(builtin_profile("fsanet-like"), 3));
  RunConfig config = defaults();
  config.loop_closure.enabled = true;
  const auto offline = run_filter_pipeline(config, frames);
  RunningServer server(config);
  Client c(server.port());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto reply = c.request(frame_json(frames[i]));
    ASSERT_FALSE(reply.contains("error")) << reply.dump();
    for (Axis a : kAxes)
      ASSERT_NEAR(reply[std::string(axis_name(a))].get<double>(), offline.outputs[i].pose[a], 1e-9) << "frame " << i;
  }
}

TEST(FrameServer, ConnectionsHaveIndependentTrackers) {
  RunningServer server;
  Client a(server.port());
  Client b(server.port());
  EXPECT_EQ(a.request({{"t", 0.0}, {"pitch", 0.0}, {"yaw", 0.0}, {"roll", 0.0}})["yaw"], 0.0);
  EXPECT_EQ(b.request({{"t", 0.0}, {"pitch", 0.0}, {"yaw", 50.0}, {"roll", 0.0}})["yaw"], 50.0);
  for (int k = 1; k < 30; ++k) {
    a.request({{"t", k / 30.0}, {"pitch", 0.0}, {"yaw", 0.0}, {"roll", 0.0}});
    b.request({{"t", k / 30.0}, {"pitch", 0.0}, {"yaw", 50.0}, {"roll", 0.0}});
  }
  EXPECT_NEAR(a.request({{"t", 1.0}, {"pitch", 0.0}, {"yaw", 0.0}, {"roll", 0.0}})["yaw"].get<double>(), 0.0, 1e-9);
  EXPECT_NEAR(b.request({{"t", 1.0}, {"pitch", 0.0}, {"yaw", 50.0}, {"roll", 0.0}})["yaw"].get<double>(), 50.0, 1e-9);
}

TEST(FrameServer, ConcurrentClientsFromThreads) {
  RunningServer server;
  std::vector<std::thread> threads;
  std::vector<int> errors(4, 0);
  for (int id = 0; id < 4; ++id)
    threads.emplace_back([&, id] {
      Client c(server.port());
      for (int k = 0; k < 200; ++k) {
        const auto r = c.request({{"t", k / 30.0}, {"pitch", 0.0}, {"yaw", 10.0 * id}, {"roll", 0.0}});
        if (r.contains("error") || std::abs(r["yaw"].get<double>() - 10.0 * id) > 1e-9) ++errors[id];
      }
    });
  for (auto& t : threads) t.join();
  for (int e : errors) EXPECT_EQ(e, 0);
}

TEST(FrameServer, BindFailureIsIoError) {
  FrameServer first(defaults(), "127.0.0.1", 0);
  EXPECT_THROW(FrameServer(defaults(), "127.0.0.1", first.port()), IoError);
  EXPECT_THROW(FrameServer(defaults(), "no.such.host.invalid", 0), IoError);
}

}  // namespace
}  // namespace hpt
