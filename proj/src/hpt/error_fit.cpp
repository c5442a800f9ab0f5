#include "hpt/error_fit.hpp"

#include "hpt/errors.hpp"
#include "hpt/levenberg_marquardt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace hpt {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2 pi)
constexpr double kDegenerateRatio = 1e-3;

bool is_degenerate(double lambda, double peak_density, double tau) {
  return std::abs(lambda) * peak_density < kDegenerateRatio * std::abs(tau);
}

Eigen::VectorXd normalized_sqrt_weights(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ValueError("fit weights must sum to a positive value");
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw ValueError("fit weights must be >= 0");
    w[static_cast<Eigen::Index>(i)] = std::sqrt(weights[i] / total);
  }
  return w;
}

// Residual RMS of a weighted fit, with weights summing to one.
double rms_from_cost(double cost) { return std::sqrt(2.0 * cost); }

using P4 = lm::Params<4>;
using P6 = lm::Params<6>;

P4 pack(const GaussParams1d& p) { return {p.lambda, p.mu, p.sigma, p.tau}; }
GaussParams1d unpack(const P4& v) { return {v[0], v[1], v[2], v[3]}; }
P6 pack(const GaussParams2d& p) { return (P6() << p.lambda, p.mu_x, p.mu_y, p.sigma_x, p.sigma_y, p.tau).finished(); }
GaussParams2d unpack(const P6& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

template <int N>
struct MultiStart {
  lm::Result<N> best;
  double base_initial_cost = 0.0;
};

// Runs every start and keeps the lowest final cost; ties go to the lower
// start index.
template <int N>
MultiStart<N> run_starts(const lm::Evaluator<N>& eval, const std::vector<lm::Params<N>>& starts) {
  MultiStart<N> out;
  bool have = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    auto res = lm::minimize<N>(eval, starts[i]);
    if (i == 0) out.base_initial_cost = res.initial_cost;
    if (!std::isfinite(res.cost)) continue;
    if (!have || res.cost < out.best.cost) {
      out.best = res;
      have = true;
    }
  }
  if (!have) throw ValueError("no start produced a finite fit residual");
  return out;
}

}  // namespace

std::vector<ErrorSample> compute_errors(std::span<const PosePair> pairs) {
  if (pairs.empty()) throw ValueError("compute_errors needs at least one (true, predicted) pair");
  std::vector<ErrorSample> out;
  out.reserve(pairs.size());
  for (const auto& [truth, pred] : pairs) {
    require_finite(truth, "true pose");
    require_finite(pred, "predicted pose");
    ErrorSample s{normalize(truth), normalize(pred), {}};
    for (Axis a : kAxes) s.abs_error[a] = std::abs(angle_difference(s.predicted_pose[a], s.true_pose[a]));
    out.push_back(s);
  }
  return out;
}

std::size_t BinnedErrors::non_empty() const {
  return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(), [](const ErrorBin& b) { return b.count > 0; }));
}

BinnedErrors bin_errors(std::span<const ErrorSample> samples, Axis axis, double bin_width, double lo, double hi) {
  if (!(bin_width > 0.0)) throw ValueError("bin width must be > 0");
  if (!(lo < hi)) throw ValueError("bin range needs lo < hi");
  BinnedErrors out;
  out.axis = axis;
  out.bin_width = bin_width;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
  out.bins.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.bins[i].lo = lo + static_cast<double>(i) * bin_width;
    out.bins[i].hi = std::min(lo + static_cast<double>(i + 1) * bin_width, hi);
  }
  std::vector<double> sums(n, 0.0);
  for (const auto& s : samples) {
    const double a = s.true_pose[axis];
    if (a < lo || a >= hi) {
      ++out.dropped;
      continue;
    }
    const auto idx = std::min(static_cast<std::size_t>((a - lo) / bin_width), n - 1);
    ++out.bins[idx].count;
    sums[idx] += s.abs_error[axis];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (out.bins[i].count > 0) out.bins[i].mean_error = sums[i] / static_cast<double>(out.bins[i].count);
  return out;
}

double gauss1d(const GaussParams1d& p, double x) {
  return p.tau - p.lambda * gaussian_density(x, p.mu, p.sigma);
}

FitResult fit_gauss1d_points(std::span<const double> x, std::span<const double> y, std::span<const double> weights,
                             std::optional<GaussParams1d> initial_guess) {
  if (x.size() != y.size() || x.size() != weights.size()) throw ValueError("fit inputs differ in length");
  if (x.size() < 4) throw ValueError("fit_gauss1d needs at least 4 points for 4 free parameters");
  const Eigen::VectorXd sw = normalized_sqrt_weights(weights);
  const auto m = static_cast<Eigen::Index>(x.size());

  lm::Evaluator<4> eval = [&](const P4& p, Eigen::VectorXd& r, lm::Jacobian<4>& j) {
    const double lambda = p[0], mu = p[1], sigma = p[2], tau = p[3];
    if (!(sigma > 0.0) || !p.allFinite()) return false;
    r.resize(m);
    j.resize(m, 4);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d = (x[i] - mu) / sigma;
      const double g = std::exp(-0.5 * d * d) / (kSqrt2Pi * sigma);
      r[i] = sw[i] * (tau - lambda * g - y[i]);
      j(i, 0) = -sw[i] * g;
      j(i, 1) = -sw[i] * lambda * g * d / sigma;
      j(i, 2) = -sw[i] * lambda * g * (d * d - 1.0) / sigma;
      j(i, 3) = sw[i];
    }
    return true;
  };

  GaussParams1d g0;
  if (initial_guess) {
    g0 = *initial_guess;
  } else {
    std::size_t imin = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
      if (y[i] < y[imin]) imin = i;
    const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    g0.mu = x[imin];
    g0.tau = ymax;
    g0.sigma = std::max(0.5 * (*xhi - *xlo), 1e-6);
    g0.lambda = (ymax - y[imin]) * kSqrt2Pi * g0.sigma;
  }
  if (!(g0.sigma > 0.0)) throw ValueError("initial sigma must be > 0");

  // Base guess plus five perturbations of width and centre. Scaling lambda
  // with sigma keeps the dip depth of the start unchanged.
  std::vector<P4> starts;
  starts.push_back(pack(g0));
  for (double f : {0.5, 2.0, 4.0}) starts.push_back(pack(GaussParams1d{g0.lambda * f, g0.mu, g0.sigma * f, g0.tau}));
  for (double s : {0.25, -0.25}) starts.push_back(pack(GaussParams1d{g0.lambda, g0.mu + s * g0.sigma, g0.sigma, g0.tau}));

  const auto ms = run_starts<4>(eval, starts);
  FitResult out;
  out.params = unpack(ms.best.params);
  out.residual_rms = rms_from_cost(ms.best.cost);
  out.initial_residual_rms = rms_from_cost(ms.base_initial_cost);
  out.iterations = ms.best.iterations;
  out.converged = ms.best.converged;
  out.degenerate = is_degenerate(out.params.lambda, 1.0 / (kSqrt2Pi * out.params.sigma), out.params.tau);
  out.samples = x.size();
  return out;
}

FitResult fit_gauss1d(const BinnedErrors& bins, std::optional<GaussParams1d> initial_guess) {
  std::vector<double> x, y, w;
  std::size_t samples = 0;
  for (const auto& b : bins.bins) {
    if (b.count == 0) continue;
    x.push_back(b.center());
    y.push_back(*b.mean_error);
    w.push_back(static_cast<double>(b.count));
    samples += b.count;
  }
  if (x.size() < 4) throw ValueError("fit_gauss1d needs at least 4 non-empty bins, got " + std::to_string(x.size()));
  FitResult r = fit_gauss1d_points(x, y, w, initial_guess);
  r.samples = samples;
  return r;
}

double gauss2d(const GaussParams2d& p, double x, double y) {
  const double dx = (x - p.mu_x) / p.sigma_x;
  const double dy = (y - p.mu_y) / p.sigma_y;
  return p.tau - p.lambda * std::exp(-0.5 * (dx * dx + dy * dy)) / (2.0 * std::numbers::pi * p.sigma_x * p.sigma_y);
}

FitResult2d fit_gauss2d(std::span<const SurfaceSample> samples, std::optional<GaussParams2d> initial_guess) {
  if (samples.size() < 7) throw ValueError("fit_gauss2d needs at least 7 samples for 6 free parameters");
  const auto m = static_cast<Eigen::Index>(samples.size());
  const double sw = std::sqrt(1.0 / static_cast<double>(samples.size()));
  constexpr double two_pi = 2.0 * std::numbers::pi;

  lm::Evaluator<6> eval = [&](const P6& p, Eigen::VectorXd& r, lm::Jacobian<6>& j) {
    const double lambda = p[0], mx = p[1], my = p[2], sx = p[3], sy = p[4], tau = p[5];
    if (!(sx > 0.0) || !(sy > 0.0) || !p.allFinite()) return false;
    r.resize(m);
    j.resize(m, 6);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& s = samples[static_cast<std::size_t>(i)];
      const double dx = (s.x - mx) / sx;
      const double dy = (s.y - my) / sy;
      const double g = std::exp(-0.5 * (dx * dx + dy * dy)) / (two_pi * sx * sy);
      r[i] = sw * (tau - lambda * g - s.error);
      j(i, 0) = -sw * g;
      j(i, 1) = -sw * lambda * g * dx / sx;
      j(i, 2) = -sw * lambda * g * dy / sy;
      j(i, 3) = -sw * lambda * g * (dx * dx - 1.0) / sx;
      j(i, 4) = -sw * lambda * g * (dy * dy - 1.0) / sy;
      j(i, 5) = sw;
    }
    return true;
  };

  std::vector<P6> starts;
  if (initial_guess) {
    starts.push_back(pack(*initial_guess));
  } else {
    auto [imin, imax] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const auto& a, const auto& b) { return a.error < b.error; });
    double xlo = samples[0].x, xhi = xlo, ylo = samples[0].y, yhi = ylo;
    for (const auto& s : samples) {
      xlo = std::min(xlo, s.x);
      xhi = std::max(xhi, s.x);
      ylo = std::min(ylo, s.y);
      yhi = std::max(yhi, s.y);
    }
    const double sx = std::max(0.5 * (xhi - xlo), 1e-6);
    const double sy = std::max(0.5 * (yhi - ylo), 1e-6);
    const double gap = imax->error - imin->error;
    // Dip at the minimum sample, then a peak at the maximum sample.
    starts.push_back(pack({gap * two_pi * sx * sy, imin->x, imin->y, sx, sy, imax->error}));
    starts.push_back(pack({-gap * two_pi * sx * sy, imax->x, imax->y, sx, sy, imin->error}));
  }
  const GaussParams2d g0 = unpack(starts.front());
  for (double f : {0.5, 2.0}) {
    GaussParams2d g = g0;
    g.sigma_x *= f;
    g.sigma_y *= f;
    g.lambda *= f * f;
    starts.push_back(pack(g));
  }
  for (double s : {0.25, -0.25}) {
    GaussParams2d g = g0;
    g.mu_x += s * g0.sigma_x;
    g.mu_y -= s * g0.sigma_y;
    starts.push_back(pack(g));
  }

  const auto ms = run_starts<6>(eval, starts);
  FitResult2d out;
  out.params = unpack(ms.best.params);
  out.residual_rms = rms_from_cost(ms.best.cost);
  out.initial_residual_rms = rms_from_cost(ms.base_initial_cost);
  out.iterations = ms.best.iterations;
  out.converged = ms.best.converged;
  out.degenerate = is_degenerate(out.params.lambda, 1.0 / (two_pi * out.params.sigma_x * out.params.sigma_y),
                                 out.params.tau);
  out.samples = samples.size();
  return out;
}

EstimatorProfile export_profile(const std::map<Axis, FitResult>& fits, const std::string& name, double r_min,
                                double r_max) {
  EstimatorProfile p;
  p.name = name;
  for (Axis a : kAxes) {
    auto it = fits.find(a);
    if (it == fits.end()) throw ValueError("export_profile is missing the " + std::string(axis_name(a)) + " fit");
    const FitResult& f = it->second;
    p[a] = NoiseModel{f.params.lambda, f.params.mu, f.params.sigma, f.params.tau, r_min, r_max};
    p.provenance[std::string(axis_name(a))] = AxisProvenance{f.samples, f.residual_rms, f.degenerate};
  }
  p.validate();
  return p;
}

}  // namespace hpt
