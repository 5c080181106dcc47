#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "renewrt/step_distribution.hpp"
#include "renewrt/walk.hpp"

namespace renewrt {

// Conventions. For a walk with up-probability p and symmetric step law F_y,
// a function exp(gamma x) is harmonic for the discounted walk iff
//
//   F(gamma) = p E[exp(gamma Y)] + q E[exp(-gamma Y)] - 1/alpha = 0,
//
// the Cramer-Lundberg equation. With L(v) = E[exp(-v Y)] that is
// p L(-gamma) + q L(gamma) = 1/alpha. For an m-phase hyperexponential law,
// clearing denominators gives a polynomial of degree 2m whose roots are all
// real; the m smallest (nonpositive) govern exit through the bottom, the m
// largest (nonnegative) exit through the top.

/// F(gamma) above; the residual every returned root is polished against.
double cramer_lundberg_residual(const StepDistribution& dist, double up_probability,
                                double discount, double gamma);

struct CramerLundbergRoots {
  double discount = 1.0;
  double up_probability = 0.5;
  Eigen::VectorXd down;  ///< m roots <= 0, ascending
  Eigen::VectorXd up;    ///< m roots >= 0, ascending
};

/// All 2m roots, polished to |F| < 1e-10. Throws NumericalFailure if the
/// polish fails, a root is complex, or two retained roots nearly coincide.
CramerLundbergRoots cramer_lundberg_solve(const StepDistribution& dist, double up_probability,
                                          double discount);

/// The m nonpositive roots gamma_i, ascending.
Eigen::VectorXd cramer_lundberg_roots(const StepDistribution& dist, double up_probability,
                                      double discount);

/// One-sided coefficients
///   c_i = R(gamma_i)/R(zeta) * prod_{j!=i}(zeta - gamma_j) / prod_{j!=i}(gamma_i - gamma_j)
/// with R(v) = prod_k (mu_k + v).
Eigen::VectorXd one_sided_coefficients(const StepDistribution& dist,
                                       const Eigen::VectorXd& roots, double zeta);

/// d c_i / d zeta, same layout as one_sided_coefficients.
Eigen::VectorXd one_sided_coefficient_derivatives(const StepDistribution& dist,
                                                  const Eigen::VectorXd& roots, double zeta);

/// E[alpha^T exp(-zeta Z)] for the one-sided walk started at depth x:
/// sum_i c_i exp(gamma_i x).
double mgf_one_sided(const StepDistribution& dist, double x, double discount, double zeta,
                     double up_probability = 0.5);

/// Coefficients of
///   E[alpha^T (A exp(-zeta Z-) 1{bottom} + B exp(-xi Z+) 1{top})]
///     = sum_i c_i exp(gamma_i x) + sum_i d_i exp(delta_i x)
/// for the two-sided walk on [0, h].
///
/// The upper terms are stored rescaled, d_i exp(delta_i x) = d_scaled_i
/// exp(delta_i (x - h)), so large h does not overflow. When alpha = 1 and
/// p = 1/2 the root 0 is double; the pair {1, exp(0 x)} is replaced by the
/// confluent basis {1, x} and `linear` holds the coefficient of x.
struct TwoSidedSolution {
  double height = 0.0;
  Eigen::VectorXd gamma;
  Eigen::VectorXd delta;
  Eigen::VectorXd c;
  Eigen::VectorXd d_scaled;
  bool confluent = false;
  double linear = 0.0;
  double max_residual = 0.0;

  double evaluate(double x) const;
  /// Unscaled d_i = d_scaled_i exp(-delta_i h). In the confluent case the
  /// entry for delta = 0 is zero and the term lives in `linear`.
  Eigen::VectorXd d() const;
};

TwoSidedSolution two_sided_coefficients(const StepDistribution& dist, double height,
                                        double discount, double zeta, double xi, double weight_bottom,
                                        double weight_top, double up_probability = 0.5);

struct MgfEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t count = 0;
  /// Outcomes that never exited (step or travel limit). They contribute 0,
  /// which for alpha < 1 is exact up to alpha^steps.
  std::uint64_t unfinished = 0;
};

/// Sample mean and standard error of alpha^T exp(-zeta Z-).
MgfEstimate empirical_mgf(std::span<const WalkOutcome> outcomes, double discount, double zeta);

}  // namespace renewrt
