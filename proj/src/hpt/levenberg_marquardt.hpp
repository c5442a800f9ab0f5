#pragma once

// Levenberg-Marquardt with Marquardt column scaling. Each step solves
//   min |J d + r|^2 + damping |D d|^2
// by Householder QR of the stacked system, so J^T J is never formed.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

namespace hpt::lm {

template <int N>
using Params = Eigen::Matrix<double, N, 1>;

template <int N>
using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, N>;

// Fills residuals r and Jacobian J at params p. Returns false when p lies
// outside the model's domain; the step is then rejected.
template <int N>
using Evaluator = std::function<bool(const Params<N>& p, Eigen::VectorXd& r, Jacobian<N>& j)>;

struct Options {
  int max_iterations = 500;
  double relative_step_tolerance = 1e-8;
  double cost_floor = 1e-28;
};

template <int N>
struct Result {
  Params<N> params;
  double cost = 0.0;  // 0.5 |r|^2
  double initial_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <int N>
Result<N> minimize(const Evaluator<N>& eval, Params<N> x, const Options& opt = {}) {
  Eigen::VectorXd r;
  Jacobian<N> j;
  Result<N> res;
  res.params = x;
  if (!eval(x, r, j)) {
    res.cost = res.initial_cost = std::numeric_limits<double>::infinity();
    return res;
  }
  double cost = 0.5 * r.squaredNorm();
  res.cost = res.initial_cost = cost;

  Params<N> scale = j.colwise().norm().transpose();
  for (int k = 0; k < N; ++k)
    if (!(scale[k] > 0.0)) scale[k] = 1.0;
  double damping = 1e-3;
  double nu = 2.0;

  Eigen::VectorXd r_try;
  Jacobian<N> j_try;
  const auto m = j.rows();
  Eigen::Matrix<double, Eigen::Dynamic, N> a(m + N, N);
  Eigen::VectorXd b(m + N);

  for (int it = 1; it <= opt.max_iterations; ++it) {
    res.iterations = it;
    if (cost <= opt.cost_floor) {
      res.converged = true;
      break;
    }
    scale = scale.cwiseMax(j.colwise().norm().transpose());

    a.topRows(m) = j;
    a.bottomRows(N) = (std::sqrt(damping) * scale).asDiagonal();
    b.head(m) = -r;
    b.tail(N).setZero();
    const Params<N> step = a.colPivHouseholderQr().solve(b);

    const Params<N> x_try = x + step;
    const double predicted = -(j * step + r).squaredNorm() * 0.5 + cost;
    bool accepted = false;
    if (step.allFinite() && eval(x_try, r_try, j_try)) {
      const double cost_try = 0.5 * r_try.squaredNorm();
      const double rho = predicted > 0.0 ? (cost - cost_try) / predicted : -1.0;
      if (cost_try < cost && rho > 1e-4) {
        accepted = true;
        const double rel = (step.array().abs() / (x.array().abs() + 1e-12)).maxCoeff();
        x = x_try;
        r.swap(r_try);
        j.swap(j_try);
        cost = cost_try;
        damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;
        if (rel < opt.relative_step_tolerance) {
          res.converged = true;
          break;
        }
      }
    }
    if (!accepted) {
      damping *= nu;
      nu *= 2.0;
      // No representable step improves the cost: a (numerical) minimum.
      if (damping > 1e30) {
        const double grad = (j.transpose() * r).cwiseQuotient(scale).template lpNorm<Eigen::Infinity>();
        res.converged = grad <= 1e-8 * std::max(1.0, std::sqrt(2.0 * cost));
        break;
      }
    }
  }
  res.params = x;
  res.cost = cost;
  return res;
}

}  // namespace hpt::lm
