#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "renewrt/pack_free.hpp"

namespace renewrt {

/// One checked grid point. `measured` passes when |measured - expected| <=
/// tolerance unless the criterion states an inequality, in which case
/// `passed` is authoritative. NaN fields print empty.
struct CheckRow {
  int criterion = 0;
  std::string point;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::uint64_t censored = 0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;
  std::uint64_t censored = 0;
};

struct ErrorCurvePoint {
  double eta = 0.0;
  double rho_hat = 0.0;
  double rho_mc = 0.0;
  double rho_mc_stderr = 0.0;
  double relative_error = 0.0;
};

using RhoTwoSidedFn = std::function<double(double mu, double height, double theta)>;

struct ValidationOptions {
  std::uint64_t seed = 20240901;
  unsigned workers = 1;
  /// Multiplies every Monte Carlo sample size; 1 runs the full grids.
  double scale = 1.0;
  /// Criteria to run, 1..9; empty runs all.
  std::vector<int> criteria;
  bool error_curve = true;
  bool wald_audit = true;
  /// Closed-form two-sided reflectivity under test.
  RhoTwoSidedFn rho_two_sided;
};

struct ValidationReport {
  std::vector<CriterionResult> criteria;
  std::vector<CheckRow> rows;
  std::vector<ErrorCurvePoint> error_curve;
  std::vector<WaldAudit> audits;
  bool passed() const;
};

inline constexpr int kCriteriaCount = 9;

ValidationReport run_validation(const ValidationOptions& opt);

/// One `[PASS]` / `[FAIL]` line per criterion.
void write_criteria_lines(std::ostream& out, const ValidationReport& r);
/// Criteria lines, failed grid points, error curve, audit, censored counts.
void write_validation_text(std::ostream& out, const ValidationReport& r);
/// section,criterion,point,measured,expected,tolerance,passed,censored
void write_validation_csv(std::ostream& out, const ValidationReport& r);

}  // namespace renewrt
