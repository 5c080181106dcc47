#pragma once

#include <optional>

#include "renewrt/step_distribution.hpp"

namespace renewrt {

/// Physical slab. `height` present means a two-sided (finite) bed.
struct MediumParams {
  double beta = 0.0;   ///< dissipation factor, 1/length
  double mu = 1.0;     ///< free-path rate, 1/length
  double theta = 0.0;  ///< incidence angle from the normal, radians, [0, pi/2)
  std::optional<double> height;

  double eta() const { return beta / mu; }
  void validate() const;
};

struct EstimateResult {
  double rho_hat = 0.0;
  std::optional<double> rho_upper;
  bool upper_valid = false;
  bool near_field_required = false;  ///< true when the bound was refused for mu <= 2 beta
  bool clamped = false;              ///< rho_hat was pulled back into [0, 1]
};

/// Delta-method reflectivity of a one-sided Beerian slab with exponential
/// free paths, at incidence theta:
///   (1 - s)(1 + eta) / (1 + (eta + s) cos theta),  s = sqrt(2 eta / (1 + 2 eta)).
/// Clamped to [0, 1].
double rho_hat_exponential(const MediumParams& m);

/// Cauchy-Schwarz upper bound, normal incidence only. Throws ValidityError
/// when mu <= 2 beta (outside the near-field regime) or theta != 0.
double rho_upper_exponential(const MediumParams& m);

/// Both of the above plus flags.
EstimateResult estimate_one_sided(const MediumParams& m);

/// Delta correction 1 - beta * D_eps E[exp(-eps Z / xbar)], with the forward
/// difference D_eps f = (f(2 eps) - f(eps)) / (eps / xbar) applied to the
/// overshoot transform averaged over the first-scattering depth. For
/// Exponential(mu) this is 1 + (beta/mu) / ((2 eps + 1)(eps + 1)).
double delta_correction(const StepDistribution& dist, double beta, double epsilon,
                        double theta = 0.0);

/// eps -> 0 limit of delta_correction: 1 + beta E[Z].
double delta_correction_limit(const StepDistribution& dist, double beta, double theta = 0.0);

/// Delta-method reflectivity for a hyperexponential free-path law, with the
/// first-scattering depth drawn from the same law. `epsilon` empty uses the
/// analytic eps -> 0 correction, which makes the single-phase case coincide
/// with rho_hat_exponential.
double rho_hat_general(const StepDistribution& dist, double beta, double theta,
                       std::optional<double> epsilon = std::nullopt);

/// Exact reflectivity of a non-Beerian two-sided bed of height h:
///   ((1 - cos theta)(1 - exp(-h mu / cos theta)) + h mu) / (h mu + 2).
double rho_two_sided(double mu, double height, double theta);
inline double tau_two_sided(double mu, double height, double theta) {
  return 1.0 - rho_two_sided(mu, height, theta);
}

/// Exit-through-bottom probability of a two-sided walk from depth
/// x cos(theta): (h - x~ + E Z+) / (E Z- + E Z+ + h). Throws InvalidArgument
/// when x~ > h (the ray crossed the bed before scattering).
double rho_two_sided_from_overshoots(double x_depth, double height, double mean_overshoot_above,
                                     double mean_overshoot_below, double theta);

/// Near-field condition lambda > 4 pi k / mu, equivalently mu > 2 beta with
/// beta = 2 pi k / lambda.
bool near_field_validity(double k_index, double wavelength, double mu);

}  // namespace renewrt
