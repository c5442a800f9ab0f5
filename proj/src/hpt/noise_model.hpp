#pragma once

#include "hpt/pose.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hpt {

// Gaussian-with-offset observation noise curve
//   R(x) = tau - lambda * N(x; mu, sigma)
// clamped to [r_min, r_max] at evaluation time. The fitted coefficients are
// kept raw; only evaluation clamps.
struct NoiseModel {
  double lambda = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double tau = 1.0;
  double r_min = 0.5;
  double r_max = 500.0;

  void validate() const;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// Gaussian density N(x; mu, sigma).
double gaussian_density(double x, double mu, double sigma);

// tau - lambda * N(x; mu, sigma), no clamping.
double eval_noise_raw(const NoiseModel& model, double x);

// Clamped to [r_min, r_max]; rejects non-finite x.
double eval_noise(const NoiseModel& model, double x);

// Per-axis provenance written alongside fitted profiles.
struct AxisProvenance {
  std::size_t samples = 0;
  double residual_rms = 0.0;
  bool degenerate = false;
};

struct EstimatorProfile {
  std::string name;
  std::array<NoiseModel, 3> axes;  // pitch, yaw, roll
  std::map<std::string, AxisProvenance> provenance;

  const NoiseModel& operator[](Axis axis) const { return axes[static_cast<int>(axis)]; }
  NoiseModel& operator[](Axis axis) { return axes[static_cast<int>(axis)]; }
  void validate() const;
};

// diag(eval_noise(pitch, z.pitch), eval_noise(yaw, z.yaw), eval_noise(roll, z.roll))
Matrix3 build_R(const EstimatorProfile& profile, const EulerPose& z);

// R with every axis evaluated at its own mu, the constant-R baseline.
Matrix3 build_R_at_mean(const EstimatorProfile& profile);

// Same profile with lambda forced to zero and tau set to the value at mu:
// the constant-R filter the adaptive one degenerates to.
EstimatorProfile constant_profile(const EstimatorProfile& profile);

// Built-in filter profiles transcribed from the published fits: "fsanet",
// "hopenet". Synthetic estimator profiles: "fsanet-like", "hopenet-like".
EstimatorProfile builtin_profile(std::string_view name);
std::vector<std::string> builtin_profile_names();

// Flat key-value profile document:
//   name = fsanet
//   pitch.lambda = 312.07
//   ...
//   meta.yaw.samples = 2000
std::string serialize_profile(const EstimatorProfile& profile);
EstimatorProfile parse_profile(std::string_view text);
EstimatorProfile load_profile(const std::string& path);
void save_profile(const EstimatorProfile& profile, const std::string& path);

// A built-in name or a path to a profile document.
EstimatorProfile resolve_profile(const std::string& name_or_path);

}  // namespace hpt
