#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace renewrt::fitting {

struct Histogram {
  std::vector<double> edges;
  std::vector<double> centers;
  std::vector<double> density;  ///< count / (n_total * width)
};

struct ExpFit {
  double mu_mle = 0.0;
  double mu_ls = 0.0;
  std::size_t n_samples = 0;
  double ks_stat = 0.0;  ///< against Exp(mu_mle)
  Histogram histogram;
};

/// 1 / sample mean.
double fit_mle(std::span<const double> samples);

/// Equal-width density histogram of `bins` bins over [0, q], q the 99.9th
/// percentile of the samples.
Histogram density_histogram(std::span<const double> samples, std::size_t bins);

/// Rate minimizing sum_c (mu exp(-mu x_c) - p_c)^2 over bin centers, by
/// golden-section search in log(mu) on [lo, hi]. Throws NumericalFailure when
/// the minimum sits on the bracket edge.
double fit_least_squares_histogram(std::span<const double> centers, std::span<const double> density,
                                   double lo, double hi);

/// Least-squares rate on the density histogram, bracket [0.01, 100] x mu_mle.
double fit_least_squares(std::span<const double> samples, std::size_t bins = 50);

/// sup_x |F_n(x) - (1 - exp(-mu x))|.
double ks_statistic(std::span<const double> samples, double mu);

ExpFit fit_exponential(std::span<const double> samples, std::size_t bins = 50);

/// One value per line; blank lines and `#` comments are skipped.
std::vector<double> read_samples(std::istream& in);
void write_samples(std::ostream& out, std::span<const double> samples);

}  // namespace renewrt::fitting
