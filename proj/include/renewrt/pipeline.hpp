#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "renewrt/bed.hpp"
#include "renewrt/fitting.hpp"
#include "renewrt/pack_free.hpp"
#include "renewrt/tracer.hpp"

namespace renewrt {

struct PipelineConfig {
  mcrt::BedSpec bed;
  mcrt::TraceOptions trace;
  std::uint64_t rays = 100'000;       ///< 2-D rays
  std::uint64_t pack_free_rays = 1'000'000;
  std::uint64_t audit_walks = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t bins = 50;
};

/// Stage that threw, with its message. Later stages are skipped.
struct StageError {
  std::string stage;
  std::string message;
};

struct PipelineResult {
  std::uint64_t particles = 0;
  TallyResult mcrt;
  std::vector<double> free_paths;
  mcrt::FluxProfile flux;
  bool non_scattering = false;  ///< no ray ever hit a particle
  std::optional<fitting::ExpFit> fit;
  std::optional<double> rho_hat_mle;
  std::optional<double> rho_hat_ls;
  std::optional<TallyResult> pack_free;  ///< 1-D MC at mu_mle
  std::optional<double> relative_error;  ///< |rho_hat(mu_mle) - rho_mcrt| / rho_mcrt
  std::optional<WaldAudit> audit;
  std::optional<StageError> error;
};

/// Builds the bed, traces it, fits the free paths, and compares the 2-D
/// reflectivity with the estimator and the 1-D simulation at the fitted rate.
/// Stage failures are captured, not thrown.
PipelineResult run_pipeline_2d(const PipelineConfig& cfg);

/// key,value lines.
void write_pipeline_csv(std::ostream& out, const PipelineConfig& cfg, const PipelineResult& r);
void write_pipeline_report(std::ostream& out, const PipelineConfig& cfg, const PipelineResult& r);

}  // namespace renewrt
