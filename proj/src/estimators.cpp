#include "renewrt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "renewrt/cramer_lundberg.hpp"
#include "renewrt/error.hpp"

namespace renewrt {

namespace {

void require_angle(double theta) {
  detail::require(theta >= 0.0 && theta < std::numbers::pi / 2, "theta must lie in [0, pi/2)");
}

double clamp_unit(double v, bool* clamped = nullptr) {
  const double c = std::clamp(v, 0.0, 1.0);
  if (clamped) *clamped = c != v;
  return c;
}

double raw_rho_hat(const MediumParams& m) {
  const double eta = m.eta();
  const double s = std::sqrt(2.0 * eta / (1.0 + 2.0 * eta));
  return (1.0 - s) * (1.0 + eta) / (1.0 + (eta + s) * std::cos(m.theta));
}

// Mean over the first-scattering depth x~ = x cos(theta), x ~ dist, of the
// alpha = 1 overshoot transform: sum_i c_i(zeta) E[exp(gamma_i x~)].
struct OvershootTransform {
  Eigen::VectorXd gamma;
  Eigen::VectorXd depth_weights;  // E[exp(gamma_i x cos theta)]
  const StepDistribution* dist;

  OvershootTransform(const StepDistribution& d, double theta) : dist(&d) {
    gamma = cramer_lundberg_roots(d, 0.5, 1.0);
    depth_weights.resize(gamma.size());
    for (Eigen::Index i = 0; i < gamma.size(); ++i)
      depth_weights[i] = d.laplace(-gamma[i] * std::cos(theta));
  }
  double value(double zeta) const {
    return one_sided_coefficients(*dist, gamma, zeta).dot(depth_weights);
  }
  double mean_overshoot() const {
    return -one_sided_coefficient_derivatives(*dist, gamma, 0.0).dot(depth_weights);
  }
};

}  // namespace

void MediumParams::validate() const {
  detail::require(std::isfinite(beta) && beta >= 0.0, "beta must be >= 0");
  detail::require(std::isfinite(mu) && mu > 0.0, "mu must be > 0");
  require_angle(theta);
  if (height) detail::require(*height > 0.0, "height must be > 0");
}

double rho_hat_exponential(const MediumParams& m) {
  m.validate();
  detail::require(!m.height, "rho_hat_exponential is defined for one-sided media only");
  return clamp_unit(raw_rho_hat(m));
}

double rho_upper_exponential(const MediumParams& m) {
  m.validate();
  detail::require(!m.height, "rho_upper_exponential is defined for one-sided media only");
  if (m.theta != 0.0)
    throw ValidityError("the reflectivity upper bound is derived for normal incidence only");
  if (!(m.mu > 2.0 * m.beta)) {
    std::ostringstream msg;
    msg << "reflectivity upper bound requires mu > 2*beta (near field, lambda > 4*pi*k*L); got mu = "
        << m.mu << ", beta = " << m.beta;
    throw ValidityError(msg.str());
  }
  const double eta = m.eta();
  const double s = std::sqrt(2.0 * eta / (1.0 + 2.0 * eta));
  return std::sqrt(1.0 - s) * std::sqrt(1.0 / (1.0 - 2.0 * eta)) / (1.0 + eta + 0.5 * s);
}

EstimateResult estimate_one_sided(const MediumParams& m) {
  m.validate();
  detail::require(!m.height, "estimate_one_sided needs a one-sided medium");
  EstimateResult r;
  r.rho_hat = clamp_unit(raw_rho_hat(m), &r.clamped);
  if (m.theta == 0.0) {
    if (m.mu > 2.0 * m.beta) {
      r.rho_upper = rho_upper_exponential(m);
      r.upper_valid = true;
    } else {
      r.near_field_required = true;
    }
  }
  return r;
}

double delta_correction(const StepDistribution& dist, double beta, double epsilon, double theta) {
  detail::require(epsilon > 0.0, "epsilon must be > 0");
  detail::require(beta >= 0.0, "beta must be >= 0");
  require_angle(theta);
  if (beta == 0.0) return 1.0;
  const OvershootTransform overshoot(dist, theta);
  const double xbar = dist.mean() * std::cos(theta);
  const double h = epsilon / xbar;
  const double diff = (overshoot.value(2.0 * h) - overshoot.value(h)) / h;
  return 1.0 - beta * diff;
}

double delta_correction_limit(const StepDistribution& dist, double beta, double theta) {
  detail::require(beta >= 0.0, "beta must be >= 0");
  require_angle(theta);
  if (beta == 0.0) return 1.0;
  return 1.0 + beta * OvershootTransform(dist, theta).mean_overshoot();
}

double rho_hat_general(const StepDistribution& dist, double beta, double theta,
                       std::optional<double> epsilon) {
  detail::require(beta >= 0.0, "beta must be >= 0");
  require_angle(theta);
  const double cos_t = std::cos(theta);
  // Per-step discount E[exp(-2 beta Y)].
  const double alpha = dist.laplace(2.0 * beta);
  const Eigen::VectorXd gamma = cramer_lundberg_roots(dist, 0.5, alpha);
  const Eigen::VectorXd c = one_sided_coefficients(dist, gamma, 0.0);

  // E_x[exp(-beta x~) E alpha^T] = sum_i c_i E[exp(-(beta - gamma_i) x cos theta)].
  double base = 0.0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i)
    base += c[i] * dist.laplace((beta - gamma[i]) * cos_t);

  const double correction = epsilon ? delta_correction(dist, beta, *epsilon, theta)
                                    : delta_correction_limit(dist, beta, theta);
  return clamp_unit(base * correction);
}

double rho_two_sided(double mu, double height, double theta) {
  detail::require(mu > 0.0, "mu must be > 0");
  detail::require(height > 0.0, "height must be > 0");
  require_angle(theta);
  const double hmu = height * mu;
  const double c = std::cos(theta);
  return ((1.0 - c) * -std::expm1(-hmu / c) + hmu) / (hmu + 2.0);
}

double rho_two_sided_from_overshoots(double x_depth, double height, double mean_overshoot_above,
                                     double mean_overshoot_below, double theta) {
  detail::require(height > 0.0, "height must be > 0");
  detail::require(x_depth >= 0.0, "first-scattering depth must be >= 0");
  detail::require(mean_overshoot_above > 0.0 && mean_overshoot_below > 0.0,
                  "mean overshoots must be > 0");
  require_angle(theta);
  const double xt = x_depth * std::cos(theta);
  if (xt > height) {
    std::ostringstream msg;
    msg << "projected depth " << xt << " exceeds bed height " << height
        << "; the ray is transmitted before scattering";
    throw InvalidArgument(msg.str());
  }
  return (height - xt + mean_overshoot_above) /
         (mean_overshoot_below + mean_overshoot_above + height);
}

bool near_field_validity(double k_index, double wavelength, double mu) {
  detail::require(k_index >= 0.0, "extinction index k must be >= 0");
  detail::require(wavelength > 0.0 && mu > 0.0, "wavelength and mu must be > 0");
  return wavelength > 4.0 * std::numbers::pi * k_index / mu;
}

}  // namespace renewrt
