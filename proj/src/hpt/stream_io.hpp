#pragma once

// JSONL and CSV frame streams.
//   JSONL: {"t": s, "pitch": deg, "yaw": deg, "roll": deg[, "gt_pitch", "gt_yaw", "gt_roll"]}
//   CSV:   t,pitch,yaw,roll[,gt_pitch,gt_yaw,gt_roll]

#include "hpt/pose.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hpt {

enum class StreamFormat { Jsonl, Csv };

StreamFormat parse_stream_format(std::string_view text);
// "auto" resolves by extension: .csv -> Csv, anything else -> Jsonl.
StreamFormat format_for_path(const std::string& path, std::string_view requested);

struct RejectedRecord {
  std::size_t line = 0;
  double t = 0.0;
  std::string reason;
};

struct StreamReadResult {
  std::vector<FrameRecord> frames;
  std::vector<RejectedRecord> rejected;
  std::vector<std::string> warnings;
};

struct ReadOptions {
  // When set, records without "t" get t = index * implicit_dt.
  std::optional<double> implicit_dt;
};

// Angles are normalized to [-180, 180). Equal timestamps are de-duplicated
// (warning); decreasing timestamps become rejected records. Malformed input
// throws ParseError with the line number.
StreamReadResult read_stream(std::istream& in, StreamFormat format, const ReadOptions& opt = {});
StreamReadResult read_stream(const std::string& path, StreamFormat format, const ReadOptions& opt = {});

// A posterior record; velocity is written when present.
struct OutputRecord {
  double t = 0.0;
  EulerPose pose;
  std::optional<Eigen::Vector3d> velocity;
  std::optional<EulerPose> ground_truth;
};

void write_stream(std::ostream& out, std::span<const OutputRecord> records, StreamFormat format);
void write_stream(const std::string& path, std::span<const OutputRecord> records, StreamFormat format);
void write_frames(const std::string& path, std::span<const FrameRecord> frames, StreamFormat format);

// One JSON frame object (wire protocol request and JSONL line).
FrameRecord frame_from_json(const nlohmann::json& j, std::optional<double> implicit_t = std::nullopt);
nlohmann::json record_to_json(const OutputRecord& r);

}  // namespace hpt
