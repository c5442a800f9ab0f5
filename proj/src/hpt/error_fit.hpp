#pragma once

// Estimator error characterization: per-axis absolute errors against ground
// truth, binning by true angle, and least-squares fits of the
// Gaussian-with-offset error curve in one and two variables.

#include "hpt/noise_model.hpp"
#include "hpt/pose.hpp"

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hpt {

struct ErrorSample {
  EulerPose true_pose;
  EulerPose predicted_pose;
  EulerPose abs_error;  // wrap-aware |predicted - true| per axis
};

using PosePair = std::pair<EulerPose, EulerPose>;  // (true, predicted)

std::vector<ErrorSample> compute_errors(std::span<const PosePair> pairs);

struct ErrorBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::optional<double> mean_error;  // empty when count == 0

  double center() const { return 0.5 * (lo + hi); }
};

struct BinnedErrors {
  Axis axis = Axis::Yaw;
  double bin_width = 10.0;
  std::vector<ErrorBin> bins;
  std::size_t dropped = 0;  // samples outside [lo, hi)

  std::size_t non_empty() const;
};

BinnedErrors bin_errors(std::span<const ErrorSample> samples, Axis axis, double bin_width, double lo, double hi);

struct GaussParams1d {
  double lambda = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double tau = 0.0;
};

struct FitResult {
  GaussParams1d params;
  double residual_rms = 0.0;
  double initial_residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::size_t samples = 0;
};

// tau - lambda * N(x; mu, sigma)
double gauss1d(const GaussParams1d& p, double x);

// Count-weighted fit over the non-empty bins (>= 4 required).
FitResult fit_gauss1d(const BinnedErrors& bins, std::optional<GaussParams1d> initial_guess = std::nullopt);

// Weighted fit over arbitrary (x, y, weight) points. Used for raw-sample mode.
FitResult fit_gauss1d_points(std::span<const double> x, std::span<const double> y, std::span<const double> weights,
                             std::optional<GaussParams1d> initial_guess = std::nullopt);

struct GaussParams2d {
  double lambda = 0.0;
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double tau = 0.0;
};

struct FitResult2d {
  GaussParams2d params;
  double residual_rms = 0.0;
  double initial_residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::size_t samples = 0;
};

struct SurfaceSample {
  double x = 0.0;
  double y = 0.0;
  double error = 0.0;
};

// tau - lambda / (2 pi sx sy) * exp(-(x-mx)^2/(2 sx^2) - (y-my)^2/(2 sy^2))
double gauss2d(const GaussParams2d& p, double x, double y);

// lambda may come out negative (an error peak instead of a dip).
FitResult2d fit_gauss2d(std::span<const SurfaceSample> samples,
                        std::optional<GaussParams2d> initial_guess = std::nullopt);

// Builds a profile from one fit per axis; every axis must be present.
EstimatorProfile export_profile(const std::map<Axis, FitResult>& fits, const std::string& name, double r_min,
                                double r_max);

}  // namespace hpt
