#include "renewrt/sweep.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "renewrt/error.hpp"
#include "renewrt/estimators.hpp"
#include "renewrt/pack_free.hpp"

namespace renewrt {

std::string format_value(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::vector<double> sweep_range(double from, double to, double step) {
  detail::require(std::isfinite(from) && std::isfinite(to), "sweep bounds must be finite");
  detail::require(step > 0.0, "sweep step must be > 0");
  detail::require(to >= from, "sweep upper bound must be >= lower bound");
  const auto n = static_cast<std::uint64_t>(std::floor((to - from) / step + 1e-9));
  detail::require(n < 1'000'000, "sweep has too many points");
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  detail::require(!cfg.values.empty(), "sweep needs at least one value");
  detail::require(cfg.mu > 0.0, "mu must be > 0");
  detail::require(cfg.theta_deg >= 0.0 && cfg.theta_deg < 90.0, "theta must lie in [0, 90) degrees");
  const double theta = cfg.theta_deg * std::numbers::pi / 180.0;

  SimulationOptions sim;
  sim.rays = cfg.rays;
  sim.seed = cfg.seed;
  sim.workers = cfg.workers;

  std::vector<SweepRow> rows;
  rows.reserve(cfg.values.size());
  for (double v : cfg.values) {
    SweepRow row;
    row.mu = cfg.mu;
    row.theta_deg = cfg.theta_deg;
    TallyResult tally;
    if (cfg.kind == SweepCase::OneSided) {
      detail::require(v >= 0.0, "eta must be >= 0");
      MediumParams m{v * cfg.mu, cfg.mu, theta, std::nullopt};
      m.validate();
      row.kind = "one-sided";
      row.eta = v;
      row.beta = m.beta;
      row.rho_hat = cfg.epsilon
                        ? rho_hat_general(StepDistribution::exponential(cfg.mu), m.beta, theta, cfg.epsilon)
                        : rho_hat_exponential(m);
      const EstimateResult est = estimate_one_sided(m);
      if (est.upper_valid) row.rho_upper = est.rho_upper;
      if (cfg.monte_carlo) tally = simulate_1d_one_sided(m, sim);
    } else {
      detail::require(v > 0.0, "h mu must be > 0");
      const double h = v / cfg.mu;
      row.kind = "two-sided";
      row.height = h;
      row.rho_hat = rho_two_sided(cfg.mu, h, theta);
      if (cfg.monte_carlo) tally = simulate_1d_two_sided(cfg.mu, h, theta, sim);
    }
    if (cfg.monte_carlo) {
      row.rho_mc = tally.rho;
      row.rho_mc_stderr = tally.rho_stderr;
      row.rays = tally.n_rays;
      row.seed = cfg.seed;
      row.conservation_error = tally.conservation_error();
      row.censored = tally.censored;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

void field(std::ostream& out, const std::optional<double>& v) {
  out << ',';
  if (v) out << format_value(*v);
}

void field(std::ostream& out, const std::optional<std::uint64_t>& v) {
  out << ',';
  if (v) out << *v;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.kind;
    field(out, r.eta);
    field(out, r.beta);
    field(out, std::optional<double>(r.mu));
    field(out, std::optional<double>(r.theta_deg));
    field(out, r.height);
    field(out, std::optional<double>(r.rho_hat));
    field(out, r.rho_upper);
    field(out, r.rho_mc);
    field(out, r.rho_mc_stderr);
    field(out, r.rays);
    field(out, r.seed);
    out << '\n';
  }
}

}  // namespace renewrt
