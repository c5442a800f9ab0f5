#pragma once

// Offline filtering of a whole stream plus the metrics report, and the
// two-stream comparison behind `eval`.

#include "hpt/config.hpp"
#include "hpt/stream_io.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hpt {

inline constexpr int kMetricsSchemaVersion = 1;

struct PipelineResult {
  std::vector<OutputRecord> outputs;  // input order, velocity included
  nlohmann::json metrics;
};

// Errors are rethrown with the same type and the offending frame index.
PipelineResult run_filter_pipeline(const RunConfig& config, std::span<const FrameRecord> frames);

// Reads config.io.input, writes config.io.output when set. Rejected records
// abort with OrderingError listing their lines. Warnings go into the metrics.
PipelineResult run_filter_files(const RunConfig& config);

// Settle target without an explicit kappa: the mean of the first
// calibration_frames observations.
EulerPose settle_target(const RunConfig& config, std::span<const FrameRecord> frames);

// Per-stream jitter, rmse against ground truth where present, settle time,
// and the rmse between the two streams. Streams must share timestamps.
nlohmann::json eval_streams(std::span<const FrameRecord> a, std::span<const FrameRecord> b, const EulerPose& target,
                            double epsilon);

// Fixed-width comparison table for an eval report.
std::string format_eval_table(const nlohmann::json& report);

}  // namespace hpt
