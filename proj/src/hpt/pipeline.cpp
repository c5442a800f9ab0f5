#include "hpt/pipeline.hpp"

#include "hpt/errors.hpp"
#include "hpt/synth.hpp"
#include "hpt/text.hpp"
#include "hpt/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace hpt {

using nlohmann::json;

namespace {

json axis_json(const AxisMetric& m) {
  return {{"pitch", m[0]}, {"yaw", m[1]}, {"roll", m[2]}};
}

json pose_json(const EulerPose& p) { return json::array({p.pitch, p.yaw, p.roll}); }

bool all_have_truth(std::span<const FrameRecord> frames) {
  return !frames.empty() &&
         std::all_of(frames.begin(), frames.end(), [](const FrameRecord& f) { return f.ground_truth.has_value(); });
}

json optional_seconds(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

[[noreturn]] void rethrow_at(std::size_t index, const std::exception_ptr& ep) {
  const std::string where = "frame " + std::to_string(index) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const ValueError& e) {
    throw ValueError(where + e.what());
  } catch (const OrderingError& e) {
    throw OrderingError(where + e.what());
  } catch (const DegradedCovarianceError& e) {
    throw DegradedCovarianceError(where + e.what());
  }
}

}  // namespace

EulerPose settle_target(const RunConfig& config, std::span<const FrameRecord> frames) {
  if (config.loop_closure.kappa) return *config.loop_closure.kappa;
  if (frames.empty()) return {};
  const auto n = std::min(frames.size(), config.loop_closure.calibration_frames);
  const auto poses = poses_of(frames.first(n));
  return calibrate_origin(poses);
}

PipelineResult run_filter_pipeline(const RunConfig& config, std::span<const FrameRecord> frames) {
  using clock = std::chrono::steady_clock;
  Tracker tracker(config);
  PipelineResult result;
  result.outputs.reserve(frames.size());
  std::vector<double> latency_ms;
  latency_ms.reserve(frames.size());

  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto start = clock::now();
    StateVector s;
    try {
      s = tracker.push(frames[i]);
    } catch (const std::exception&) {
      rethrow_at(i, std::current_exception());
    }
    latency_ms.push_back(std::chrono::duration<double, std::milli>(clock::now() - start).count());
    result.outputs.push_back({frames[i].t, s.pose, s.velocity, frames[i].ground_truth});
  }

  json m;
  m["schema_version"] = kMetricsSchemaVersion;
  m["frame_count"] = frames.size();

  std::vector<EulerPose> filtered;
  filtered.reserve(result.outputs.size());
  for (const auto& o : result.outputs) filtered.push_back(o.pose);
  const auto raw = poses_of(frames);
  const auto times = times_of(frames);

  if (all_have_truth(frames)) {
    const auto truth = truths_of(frames);
    m["rmse"] = {{"raw", axis_json(rmse(raw, truth))}, {"filtered", axis_json(rmse(filtered, truth))}};
  } else {
    m["rmse"] = nullptr;
  }
  if (frames.size() >= 2)
    m["jitter"] = {{"raw", axis_json(jitter(raw))}, {"filtered", axis_json(jitter(filtered))}};
  else
    m["jitter"] = nullptr;

  const EulerPose target = settle_target(config, frames);
  m["settle"] = {{"target", pose_json(target)},
                 {"epsilon", config.settle_epsilon},
                 {"raw", optional_seconds(settle_time(times, raw, target, config.settle_epsilon))},
                 {"filtered", optional_seconds(settle_time(times, filtered, target, config.settle_epsilon))}};

  if (latency_ms.empty()) {
    m["latency_ms"] = nullptr;
  } else {
    std::vector<double> sorted = latency_ms;
    std::sort(sorted.begin(), sorted.end());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    m["latency_ms"] = {{"mean", mean}, {"median", sorted[sorted.size() / 2]}, {"max", sorted.back()}};
  }

  const auto origin = tracker.origin();
  m["loop_closure"] = {{"enabled", config.loop_closure.enabled},
                       {"kappa", origin ? pose_json(*origin) : json(nullptr)}};
  m["noise_profile"] = config.noise.profile.name;
  result.metrics = std::move(m);
  return result;
}

PipelineResult run_filter_files(const RunConfig& config) {
  if (config.io.input.empty()) throw ValueError("no input stream given (io.input)");
  ReadOptions opt;
  if (config.kalman.dt_mode == DtMode::Fixed) opt.implicit_dt = config.kalman.fixed_dt;
  const auto in = read_stream(config.io.input, format_for_path(config.io.input, config.io.format), opt);
  if (!in.rejected.empty()) {
    std::ostringstream msg;
    msg << config.io.input << ": " << in.rejected.size() << " record(s) rejected for timestamp regression:";
    for (const auto& r : in.rejected) msg << "\n  line " << r.line << ": " << r.reason;
    throw OrderingError(msg.str());
  }
  auto result = run_filter_pipeline(config, in.frames);
  result.metrics["warnings"] = in.warnings;
  if (!config.io.output.empty())
    write_stream(config.io.output, result.outputs, format_for_path(config.io.output, config.io.format));
  return result;
}

json eval_streams(std::span<const FrameRecord> a, std::span<const FrameRecord> b, const EulerPose& target,
                  double epsilon) {
  if (a.size() != b.size())
    throw ValueError("eval needs streams of equal length (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  if (a.empty()) throw ValueError("eval needs non-empty streams");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i].t - b[i].t) > 1e-9)
      throw ValueError("eval streams disagree on the timestamp of frame " + std::to_string(i));

  auto describe = [&](std::span<const FrameRecord> s) {
    json d;
    const auto poses = poses_of(s);
    d["jitter"] = s.size() >= 2 ? axis_json(jitter(poses)) : json(nullptr);
    d["rmse_vs_truth"] = all_have_truth(s) ? axis_json(rmse(poses, truths_of(s))) : json(nullptr);
    d["settle_time"] = optional_seconds(settle_time(times_of(s), poses, target, epsilon));
    return d;
  };
  json report;
  report["schema_version"] = kMetricsSchemaVersion;
  report["frame_count"] = a.size();
  report["a"] = describe(a);
  report["b"] = describe(b);
  report["rmse_a_vs_b"] = axis_json(rmse(poses_of(a), poses_of(b)));
  report["settle"] = {{"target", pose_json(target)}, {"epsilon", epsilon}};
  return report;
}

std::string format_eval_table(const json& report) {
  std::ostringstream out;
  auto cell = [](const json& v) {
    if (v.is_null()) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v.get<double>());
    return std::string(buf);
  };
  auto row = [&](const std::string& label, const json& a, const json& b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-22s %12s %12s\n", label.c_str(), cell(a).c_str(), cell(b).c_str());
    out << buf;
  };
  char head[128];
  std::snprintf(head, sizeof head, "%-22s %12s %12s\n", "metric", "a", "b");
  out << head;
  for (const char* axis : {"pitch", "yaw", "roll"}) {
    row(std::string("jitter.") + axis, report["a"]["jitter"].is_null() ? json() : report["a"]["jitter"][axis],
        report["b"]["jitter"].is_null() ? json() : report["b"]["jitter"][axis]);
  }
  for (const char* axis : {"pitch", "yaw", "roll"}) {
    const auto& ra = report["a"]["rmse_vs_truth"];
    const auto& rb = report["b"]["rmse_vs_truth"];
    row(std::string("rmse_vs_truth.") + axis, ra.is_null() ? json() : ra[axis], rb.is_null() ? json() : rb[axis]);
  }
  row("settle_time", report["a"]["settle_time"], report["b"]["settle_time"]);
  for (const char* axis : {"pitch", "yaw", "roll"}) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-22s %12s\n", (std::string("rmse_a_vs_b.") + axis).c_str(),
                  cell(report["rmse_a_vs_b"][axis]).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace hpt
