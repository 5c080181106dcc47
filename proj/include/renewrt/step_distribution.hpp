#pragma once

#include <complex>

#include <Eigen/Core>

#include "renewrt/rng.hpp"

namespace renewrt {

/// Homogenized free-path law: a hyperexponential mixture
///   f(y) = sum_i a_i mu_i exp(-mu_i y),
/// with a single phase being the plain exponential. Exponential(mu) and
/// Hyperexponential([1], [mu]) share one representation and behave identically.
class StepDistribution {
 public:
  static StepDistribution exponential(double rate);
  static StepDistribution hyperexponential(Eigen::VectorXd weights, Eigen::VectorXd rates);

  Eigen::Index phases() const { return rates_.size(); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& rates() const { return rates_; }
  bool is_exponential() const { return phases() == 1; }

  double mean() const;
  double second_moment() const;

  /// E[exp(-v Y)] = sum_i a_i mu_i / (mu_i + v), valid for Re v > -min mu_i.
  double laplace(double v) const;
  std::complex<double> laplace(std::complex<double> v) const;
  /// d/dv E[exp(-v Y)].
  double laplace_derivative(double v) const;

  /// R(v) = prod_i (mu_i + v): the common denominator of the transform.
  double denominator(double v) const;

  double sample(CounterRng& rng) const;

 private:
  StepDistribution(Eigen::VectorXd weights, Eigen::VectorXd rates);

  Eigen::VectorXd weights_;
  Eigen::VectorXd rates_;
  Eigen::VectorXd cumulative_;
};

}  // namespace renewrt
