#pragma once

// Run configuration: a flat, sectioned key-value document.
//
//   [kalman]        q, p0, dt_mode, fixed_dt, joseph_form, noise_on_blended
//   [noise]         profile, adaptive
//   [loop_closure]  enabled, xi, theta, norm_mode, kappa, calibration_frames
//   [io]            input, output, format, listen
//   [metrics]       settle_epsilon
//   [trajectory]    preset, duration, rate, pitch, yaw, roll, dwells, ramp
//   [synth_noise]   profile, bias, seed
//   [dataset]       samples, range, curve, bin_width
//   [fit]           axis, bin_width, range, mode, name, base, pair, r_min, r_max
//
// Keys are addressed as "section.key". Values are text; typing happens in
// build_run_config.

#include "hpt/kalman.hpp"
#include "hpt/loop_closure.hpp"
#include "hpt/noise_model.hpp"
#include "hpt/synth.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hpt {

class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text);
  static ConfigDocument load(const std::string& path);

  // Throws ValueError for keys outside the schema.
  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }
  std::string dump() const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> entries_;
};

struct NoiseSection {
  std::string profile_ref = "fsanet";
  bool adaptive = true;
  EstimatorProfile profile;  // resolved, constant_profile applied when !adaptive
};

struct LoopClosureSection {
  bool enabled = false;
  LoopClosureConfig params;      // kappa ignored when calibrating
  std::optional<EulerPose> kappa;  // absent: calibrate from the first frames
  std::size_t calibration_frames = 30;
};

struct IoSection {
  std::string input;
  std::string output;
  std::string format = "auto";
  std::string listen = "127.0.0.1:7878";
};

struct SimulateSection {
  TrajectorySpec trajectory = benchmark_trajectory();
  std::string noise_profile = "fsanet-like";  // "none" for clean truth
  EulerPose bias;
  std::uint64_t seed = 1;
  std::size_t dataset_samples = 0;  // > 0: emit an error dataset instead of a stream
  double dataset_lo = -90.0;
  double dataset_hi = 90.0;
  bool dataset_curve = false;  // noiseless one-sample-per-bin dataset
  double dataset_bin_width = 10.0;
};

struct FitSection {
  std::optional<Axis> axis;  // absent: all axes
  double bin_width = 10.0;
  double lo = -90.0;
  double hi = 90.0;
  bool raw = false;
  std::string name = "fitted";
  std::string base = "fsanet";
  std::optional<std::pair<Axis, Axis>> pair;
  double r_min = 0.5;
  double r_max = 500.0;
};

struct RunConfig {
  KalmanConfig kalman;
  NoiseSection noise;
  LoopClosureSection loop_closure;
  IoSection io;
  double settle_epsilon = 1.0;
  SimulateSection simulate;
  FitSection fit;
};

// Validates every section; the noise profile must resolve.
RunConfig build_run_config(const ConfigDocument& doc);

// Parses "host:port"; host defaults to 127.0.0.1 when omitted.
std::pair<std::string, int> parse_listen_address(std::string_view text);

}  // namespace hpt
