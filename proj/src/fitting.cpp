#include "renewrt/fitting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "renewrt/error.hpp"

namespace renewrt::fitting {

namespace {

void require_positive_samples(std::span<const double> samples, std::size_t at_least) {
  if (samples.size() < at_least) {
    std::ostringstream msg;
    msg << "need at least " << at_least << " samples, got " << samples.size();
    throw InvalidArgument(msg.str());
  }
  for (double s : samples)
    detail::require(std::isfinite(s) && s > 0.0, "samples must be finite and positive");
}

double sse(std::span<const double> centers, std::span<const double> density, double mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double r = mu * std::exp(-mu * centers[i]) - density[i];
    s += r * r;
  }
  return s;
}

}  // namespace

double fit_mle(std::span<const double> samples) {
  require_positive_samples(samples, 2);
  double sum = 0.0;
  for (double s : samples) sum += s;
  return static_cast<double>(samples.size()) / sum;
}

Histogram density_histogram(std::span<const double> samples, std::size_t bins) {
  require_positive_samples(samples, 2);
  detail::require(bins >= 5, "least-squares fit needs at least 5 bins");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto q_index = static_cast<std::size_t>(std::ceil(0.999 * static_cast<double>(sorted.size()))) - 1;
  const double top = sorted[std::min(q_index, sorted.size() - 1)];
  const double width = top / static_cast<double>(bins);
  const double n = static_cast<double>(sorted.size());

  Histogram h;
  h.edges.resize(bins + 1);
  h.centers.resize(bins);
  h.density.assign(bins, 0.0);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = width * static_cast<double>(k);
  for (std::size_t k = 0; k < bins; ++k) h.centers[k] = width * (static_cast<double>(k) + 0.5);
  for (double s : sorted) {
    if (s > top) break;
    const auto k = std::min(bins - 1, static_cast<std::size_t>(s / width));
    h.density[k] += 1.0;
  }
  for (double& d : h.density) d /= n * width;
  return h;
}

double fit_least_squares_histogram(std::span<const double> centers, std::span<const double> density,
                                   double lo, double hi) {
  detail::require(centers.size() == density.size() && !centers.empty(),
                  "histogram centers and densities must match");
  detail::require(lo > 0.0 && hi > lo, "least-squares bracket must satisfy 0 < lo < hi");
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo);
  double b = std::log(hi);
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = sse(centers, density, std::exp(x1));
  double f2 = sse(centers, density, std::exp(x2));
  int iter = 0;
  for (; iter < 500 && (b - a) > 1e-12; ++iter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = sse(centers, density, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = sse(centers, density, std::exp(x2));
    }
  }
  const double mu = std::exp(0.5 * (a + b));
  const double edge_tol = 1e-6;
  if (iter >= 500 || std::log(mu / lo) < edge_tol || std::log(hi / mu) < edge_tol) {
    std::ostringstream msg;
    msg << "least-squares exponential fit did not converge inside the bracket [" << lo << ", " << hi
        << "] (ended at mu = " << mu << ")";
    throw NumericalFailure(msg.str());
  }
  return mu;
}

double fit_least_squares(std::span<const double> samples, std::size_t bins) {
  const double mu_mle = fit_mle(samples);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (*lo == *hi)
    throw NumericalFailure("least-squares exponential fit is degenerate: all samples are equal");
  const Histogram h = density_histogram(samples, bins);
  return fit_least_squares_histogram(h.centers, h.density, 0.01 * mu_mle, 100.0 * mu_mle);
}

double ks_statistic(std::span<const double> samples, double mu) {
  detail::require(!samples.empty(), "KS statistic needs samples");
  detail::require(mu > 0.0, "mu must be > 0");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = -std::expm1(-mu * std::max(0.0, sorted[i]));
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    d = std::max({d, cdf - below, above - cdf});
  }
  return d;
}

ExpFit fit_exponential(std::span<const double> samples, std::size_t bins) {
  ExpFit fit;
  fit.n_samples = samples.size();
  fit.mu_mle = fit_mle(samples);
  fit.histogram = density_histogram(samples, bins);
  fit.mu_ls = fit_least_squares(samples, bins);
  fit.ks_stat = ks_statistic(samples, fit.mu_mle);
  return fit;
}

std::vector<double> read_samples(std::istream& in) {
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    double v = 0.0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      std::ostringstream msg;
      msg << "sample file line " << line_no << ": not a number";
      throw InvalidArgument(msg.str());
    }
    out.push_back(v);
  }
  return out;
}

void write_samples(std::ostream& out, std::span<const double> samples) {
  char buf[64];
  for (double s : samples) {
    const auto res = std::to_chars(buf, buf + sizeof buf, s);
    out.write(buf, res.ptr - buf);
    out.put('\n');
  }
}

}  // namespace renewrt::fitting
