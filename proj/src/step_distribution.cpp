#include "renewrt/step_distribution.hpp"

#include <cmath>
#include <utility>

#include "renewrt/error.hpp"

namespace renewrt {

StepDistribution::StepDistribution(Eigen::VectorXd weights, Eigen::VectorXd rates)
    : weights_(std::move(weights)), rates_(std::move(rates)) {
  detail::require(rates_.size() >= 1, "step distribution needs at least one phase");
  detail::require(weights_.size() == rates_.size(), "weights and rates differ in length");
  for (Eigen::Index i = 0; i < rates_.size(); ++i) {
    detail::require(std::isfinite(rates_[i]) && rates_[i] > 0.0, "step rates must be positive");
    detail::require(weights_[i] > 0.0 && weights_[i] <= 1.0, "mixture weights must lie in (0, 1]");
  }
  detail::require(std::abs(weights_.sum() - 1.0) <= 1e-12, "mixture weights must sum to 1");
  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) cumulative_[i] = (acc += weights_[i]);
}

StepDistribution StepDistribution::exponential(double rate) {
  return {Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, rate)};
}

StepDistribution StepDistribution::hyperexponential(Eigen::VectorXd weights,
                                                    Eigen::VectorXd rates) {
  return {std::move(weights), std::move(rates)};
}

double StepDistribution::mean() const { return weights_.cwiseQuotient(rates_).sum(); }

double StepDistribution::second_moment() const {
  return 2.0 * weights_.cwiseQuotient(rates_.cwiseAbs2()).sum();
}

double StepDistribution::laplace(double v) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rates_.size(); ++i) s += weights_[i] * rates_[i] / (rates_[i] + v);
  return s;
}

std::complex<double> StepDistribution::laplace(std::complex<double> v) const {
  std::complex<double> s = 0.0;
  for (Eigen::Index i = 0; i < rates_.size(); ++i) s += weights_[i] * rates_[i] / (rates_[i] + v);
  return s;
}

double StepDistribution::laplace_derivative(double v) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rates_.size(); ++i) {
    const double d = rates_[i] + v;
    s -= weights_[i] * rates_[i] / (d * d);
  }
  return s;
}

double StepDistribution::denominator(double v) const { return (rates_.array() + v).prod(); }

double StepDistribution::sample(CounterRng& rng) const {
  if (rates_.size() == 1) return rng.exponential(rates_[0]);
  const double u = rng.uniform();
  Eigen::Index phase = 0;
  while (phase + 1 < cumulative_.size() && u > cumulative_[phase]) ++phase;
  return rng.exponential(rates_[phase]);
}

}  // namespace renewrt
