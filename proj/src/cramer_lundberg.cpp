#include "renewrt/cramer_lundberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/LU>
#include <unsupported/Eigen/Polynomials>

#include "renewrt/error.hpp"

namespace renewrt {

namespace {

constexpr double kRootTolerance = 1e-10;
constexpr double kDistinctRoots = 1e-8;

// Ascending coefficient vectors.
Eigen::VectorXd poly_mul(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i, b.size()) += a[i] * b;
  return r;
}

Eigen::VectorXd poly_add(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(std::max(a.size(), b.size()));
  r.head(a.size()) += a;
  r.head(b.size()) += b;
  return r;
}

Eigen::VectorXd linear(double c0, double c1) { return Eigen::Vector2d(c0, c1); }

bool is_symmetric(double p) { return std::abs(p - 0.5) < 1e-15; }

// N(gamma) = F(gamma) * prod_k (mu_k - gamma)(mu_k + gamma).
Eigen::VectorXd cleared_polynomial(const StepDistribution& dist, double p, double alpha) {
  const auto& mu = dist.rates();
  const auto& a = dist.weights();
  const Eigen::Index m = dist.phases();
  const double q = 1.0 - p;

  std::vector<Eigen::VectorXd> factors;
  for (Eigen::Index k = 0; k < m; ++k) factors.push_back(Eigen::Vector3d(mu[k] * mu[k], 0.0, -1.0));

  Eigen::VectorXd all = Eigen::VectorXd::Ones(1);
  for (const auto& f : factors) all = poly_mul(all, f);
  Eigen::VectorXd n = -all / alpha;

  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd others = Eigen::VectorXd::Ones(1);
    for (Eigen::Index k = 0; k < m; ++k)
      if (k != j) others = poly_mul(others, factors[k]);
    const double s = a[j] * mu[j];
    const Eigen::VectorXd up = poly_mul(linear(mu[j], 1.0), others) * (p * s);
    const Eigen::VectorXd down = poly_mul(linear(mu[j], -1.0), others) * (q * s);
    n = poly_add(n, poly_add(up, down));
  }
  return n;
}

double residual_derivative(const StepDistribution& dist, double p, double gamma) {
  return -p * dist.laplace_derivative(-gamma) + (1.0 - p) * dist.laplace_derivative(gamma);
}

double polish(const StepDistribution& dist, double p, double alpha, double gamma) {
  double f = cramer_lundberg_residual(dist, p, alpha, gamma);
  for (int iter = 0; iter < 100 && std::abs(f) > 1e-15; ++iter) {
    const double df = residual_derivative(dist, p, gamma);
    if (df == 0.0 || !std::isfinite(df)) break;
    const double step = f / df;
    double damping = 1.0;
    double next = gamma - step;
    double f_next = cramer_lundberg_residual(dist, p, alpha, next);
    for (int halvings = 0; halvings < 40 && !(std::abs(f_next) < std::abs(f)); ++halvings) {
      damping *= 0.5;
      next = gamma - damping * step;
      f_next = cramer_lundberg_residual(dist, p, alpha, next);
    }
    if (!(std::abs(f_next) < std::abs(f))) break;
    gamma = next;
    f = f_next;
  }
  return gamma;
}

void require_distinct(const Eigen::VectorXd& roots, const char* which) {
  for (Eigen::Index i = 0; i < roots.size(); ++i)
    for (Eigen::Index j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < kDistinctRoots) {
        std::ostringstream msg;
        msg << "near-degenerate " << which << " Cramer-Lundberg roots " << roots[i] << " and "
            << roots[j] << " (confluent forms are not supported)";
        throw NumericalFailure(msg.str());
      }
}

void validate_inputs(double p, double alpha) {
  detail::require(p > 0.0 && p < 1.0, "up-step probability must lie in (0, 1)");
  detail::require(alpha > 0.0 && alpha <= 1.0, "discount alpha must lie in (0, 1]");
}

}  // namespace

double cramer_lundberg_residual(const StepDistribution& dist, double up_probability,
                                double discount, double gamma) {
  return up_probability * dist.laplace(-gamma) + (1.0 - up_probability) * dist.laplace(gamma) -
         1.0 / discount;
}

CramerLundbergRoots cramer_lundberg_solve(const StepDistribution& dist, double up_probability,
                                          double discount) {
  validate_inputs(up_probability, discount);
  const Eigen::Index m = dist.phases();
  Eigen::VectorXd poly = cleared_polynomial(dist, up_probability, discount);

  // alpha = 1 makes gamma = 0 an exact root (double when p = 1/2); deflate it
  // so the eigenvalue solver never sees the multiplicity.
  int zeros = 0;
  if (discount == 1.0) {
    zeros = is_symmetric(up_probability) ? 2 : 1;
    poly = poly.tail(poly.size() - zeros).eval();
  }

  std::vector<double> roots(static_cast<std::size_t>(zeros), 0.0);
  if (poly.size() > 1) {
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(poly);
    for (const auto& z : solver.roots()) {
      if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) {
        std::ostringstream msg;
        msg << "Cramer-Lundberg equation has a complex root " << z << " at alpha = " << discount;
        throw NumericalFailure(msg.str());
      }
      roots.push_back(polish(dist, up_probability, discount, z.real()));
    }
  }
  std::sort(roots.begin(), roots.end());
  if (static_cast<Eigen::Index>(roots.size()) != 2 * m)
    throw NumericalFailure("Cramer-Lundberg polynomial returned the wrong number of roots");

  for (double g : roots) {
    const double r = cramer_lundberg_residual(dist, up_probability, discount, g);
    if (!(std::abs(r) < kRootTolerance)) {
      std::ostringstream msg;
      msg << "Cramer-Lundberg root polish failed: gamma = " << g << ", residual = " << r
          << ", alpha = " << discount;
      throw NumericalFailure(msg.str());
    }
  }

  CramerLundbergRoots out;
  out.discount = discount;
  out.up_probability = up_probability;
  out.down = Eigen::Map<const Eigen::VectorXd>(roots.data(), m);
  out.up = Eigen::Map<const Eigen::VectorXd>(roots.data() + m, m);
  if (out.down.maxCoeff() > 1e-12 || out.up.minCoeff() < -1e-12)
    throw NumericalFailure("Cramer-Lundberg roots do not split into m nonpositive and m nonnegative");
  out.down = out.down.cwiseMin(0.0);
  out.up = out.up.cwiseMax(0.0);
  require_distinct(out.down, "lower");
  require_distinct(out.up, "upper");
  return out;
}

Eigen::VectorXd cramer_lundberg_roots(const StepDistribution& dist, double up_probability,
                                      double discount) {
  return cramer_lundberg_solve(dist, up_probability, discount).down;
}

Eigen::VectorXd one_sided_coefficients(const StepDistribution& dist,
                                       const Eigen::VectorXd& roots, double zeta) {
  detail::require(zeta >= 0.0, "zeta must be >= 0");
  const Eigen::Index m = roots.size();
  Eigen::VectorXd c(m);
  const double r_zeta = dist.denominator(zeta);
  for (Eigen::Index i = 0; i < m; ++i) {
    double ratio = dist.denominator(roots[i]) / r_zeta;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) ratio *= (zeta - roots[j]) / (roots[i] - roots[j]);
    c[i] = ratio;
  }
  return c;
}

Eigen::VectorXd one_sided_coefficient_derivatives(const StepDistribution& dist,
                                                  const Eigen::VectorXd& roots, double zeta) {
  const Eigen::Index m = roots.size();
  const auto& mu = dist.rates();
  const double r = dist.denominator(zeta);
  double dr = 0.0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    double prod = 1.0;
    for (Eigen::Index k = 0; k < mu.size(); ++k)
      if (k != j) prod *= mu[k] + zeta;
    dr += prod;
  }

  Eigen::VectorXd dc(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double scale = dist.denominator(roots[i]);
    double p = 1.0;
    double dp = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i) continue;
      scale /= roots[i] - roots[j];
      p *= zeta - roots[j];
      double partial = 1.0;
      for (Eigen::Index k = 0; k < m; ++k)
        if (k != i && k != j) partial *= zeta - roots[k];
      dp += partial;
    }
    dc[i] = scale * (dp * r - p * dr) / (r * r);
  }
  return dc;
}

double mgf_one_sided(const StepDistribution& dist, double x, double discount, double zeta,
                     double up_probability) {
  detail::require(x >= 0.0, "depth x must be >= 0");
  const Eigen::VectorXd gamma = cramer_lundberg_roots(dist, up_probability, discount);
  const Eigen::VectorXd c = one_sided_coefficients(dist, gamma, zeta);
  return c.dot((gamma * x).array().exp().matrix());
}

double TwoSidedSolution::evaluate(double x) const {
  double v = c.dot((gamma * x).array().exp().matrix()) +
             d_scaled.dot((delta.array() * (x - height)).exp().matrix());
  if (confluent) v += linear * x;
  return v;
}

Eigen::VectorXd TwoSidedSolution::d() const {
  Eigen::VectorXd out = d_scaled.array() * (-delta.array() * height).exp();
  if (confluent) out[0] = 0.0;
  return out;
}

TwoSidedSolution two_sided_coefficients(const StepDistribution& dist, double height,
                                        double discount, double zeta, double xi, double weight_bottom,
                                        double weight_top, double up_probability) {
  detail::require(height > 0.0, "two-sided height must be positive");
  detail::require(zeta >= 0.0 && xi >= 0.0, "zeta and xi must be >= 0");
  const CramerLundbergRoots roots = cramer_lundberg_solve(dist, up_probability, discount);
  const Eigen::Index m = dist.phases();
  const auto& mu = dist.rates();
  const double h = height;

  TwoSidedSolution sol;
  sol.height = h;
  sol.gamma = roots.down;
  sol.delta = roots.up;
  sol.confluent = discount == 1.0 && is_symmetric(up_probability);
  if (!sol.confluent) {
    Eigen::VectorXd all(2 * m);
    all << sol.gamma, sol.delta;
    require_distinct(all, "two-sided");
  }

  Eigen::MatrixXd system(2 * m, 2 * m);
  Eigen::VectorXd rhs(2 * m);
  for (Eigen::Index t = 0; t < m; ++t) {
    const double lo = mu[t];
    const double hi = mu[t];
    for (Eigen::Index i = 0; i < m; ++i) {
      system(t, i) = 1.0 / (lo + sol.gamma[i]);
      system(m + t, i) = std::exp(sol.gamma[i] * h) / (hi - sol.gamma[i]);
      if (sol.confluent && i == 0) {
        // basis function x: derivative in the root of the exponential columns at 0.
        system(t, m + i) = -1.0 / (lo * lo);
        system(m + t, m + i) = h / hi + 1.0 / (hi * hi);
      } else {
        system(t, m + i) = std::exp(-sol.delta[i] * h) / (lo + sol.delta[i]);
        system(m + t, m + i) = 1.0 / (hi - sol.delta[i]);
      }
    }
    rhs[t] = weight_bottom / (lo + zeta);
    rhs[m + t] = weight_top / (hi + xi);
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible() || lu.rcond() < 1e-15) {
    std::ostringstream msg;
    msg << "two-sided coefficient system is singular for h = " << h << ", alpha = " << discount;
    throw NumericalFailure(msg.str());
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  sol.max_residual = (system * x - rhs).cwiseAbs().maxCoeff();
  if (!(sol.max_residual < 1e-10)) {
    std::ostringstream msg;
    msg << "two-sided coefficient solve residual " << sol.max_residual << " for h = " << h
        << ", alpha = " << discount;
    throw NumericalFailure(msg.str());
  }
  sol.c = x.head(m);
  sol.d_scaled = x.tail(m);
  if (sol.confluent) {
    sol.linear = sol.d_scaled[0];
    sol.d_scaled[0] = 0.0;
  }
  return sol;
}

MgfEstimate empirical_mgf(std::span<const WalkOutcome> outcomes, double discount, double zeta) {
  detail::require(!outcomes.empty(), "empirical_mgf needs at least one outcome");
  MgfEstimate est;
  est.count = outcomes.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& o : outcomes) {
    double v = 0.0;
    if (o.exited())
      v = std::pow(discount, static_cast<double>(o.steps)) * std::exp(-zeta * o.overshoot_below);
    else
      ++est.unfinished;
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(est.count);
  est.estimate = sum / n;
  if (est.count > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.estimate * est.estimate) / (n - 1.0));
    est.standard_error = std::sqrt(var / n);
  }
  return est;
}

}  // namespace renewrt
