#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace renewrt {

enum class SweepCase { OneSided, TwoSided };

/// A one-sided sweep walks eta at fixed mu (beta = eta mu); a two-sided sweep
/// walks h mu at fixed mu (h = value / mu).
struct SweepConfig {
  SweepCase kind = SweepCase::OneSided;
  std::vector<double> values;
  double mu = 1.0;
  double theta_deg = 0.0;
  std::optional<double> epsilon;
  bool monte_carlo = false;
  std::uint64_t rays = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// from, from + step, ... up to `to` inclusive (within 1e-9 step).
std::vector<double> sweep_range(double from, double to, double step);

/// Empty optionals print as empty CSV fields.
struct SweepRow {
  std::string kind;
  std::optional<double> eta;
  std::optional<double> beta;
  double mu = 1.0;
  double theta_deg = 0.0;
  std::optional<double> height;
  double rho_hat = 0.0;
  std::optional<double> rho_upper;
  std::optional<double> rho_mc;
  std::optional<double> rho_mc_stderr;
  std::optional<std::uint64_t> rays;
  std::optional<std::uint64_t> seed;
  double conservation_error = 0.0;
  std::uint64_t censored = 0;
};

inline constexpr const char* kSweepHeader =
    "case,eta,beta,mu,theta_deg,h,rho_hat,rho_upper,rho_mc,rho_mc_stderr,n_rays,seed";

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// printf("%.12g"): the precision shared by `estimate` and sweep output.
std::string format_value(double v);

}  // namespace renewrt
