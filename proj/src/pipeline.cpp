#include "renewrt/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "renewrt/estimators.hpp"
#include "renewrt/sweep.hpp"

namespace renewrt {

namespace {

// Independent Philox keys for the 1-D stages.
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t stage) {
  return seed + stage * 0x9E3779B97F4A7C15ull;
}

template <typename Fn>
bool stage(PipelineResult& r, const char* name, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const std::exception& e) {
    r.error = StageError{name, e.what()};
    return false;
  }
}

}  // namespace

PipelineResult run_pipeline_2d(const PipelineConfig& cfg) {
  PipelineResult r;
  std::optional<mcrt::BedGeometry> bed;
  if (!stage(r, "bed", [&] { bed.emplace(mcrt::build_bed(cfg.bed)); })) return r;
  r.particles = bed->centers().size();

  mcrt::Simulation2dResult sim;
  if (!stage(r, "trace", [&] {
        SimulationOptions opt;
        opt.rays = cfg.rays;
        opt.seed = cfg.seed;
        opt.workers = cfg.workers;
        opt.weight_cutoff = cfg.trace.weight_cutoff;
        sim = mcrt::simulate_2d(*bed, cfg.trace, opt, cfg.bins);
      }))
    return r;
  r.mcrt = sim.tally;
  r.flux = std::move(sim.flux);
  r.free_paths = std::move(sim.free_paths);
  r.non_scattering = sim.first_flights.empty();
  if (r.non_scattering) return r;

  if (!stage(r, "fit", [&] { r.fit = fitting::fit_exponential(r.free_paths, cfg.bins); })) return r;

  const double beta = cfg.trace.beta;
  const double theta = cfg.trace.theta;
  if (!stage(r, "estimate", [&] {
        r.rho_hat_mle = rho_hat_exponential({beta, r.fit->mu_mle, theta, std::nullopt});
        r.rho_hat_ls = rho_hat_exponential({beta, r.fit->mu_ls, theta, std::nullopt});
        if (r.mcrt.rho > 0.0) r.relative_error = std::abs(*r.rho_hat_mle - r.mcrt.rho) / r.mcrt.rho;
      }))
    return r;

  if (!stage(r, "pack-free", [&] {
        SimulationOptions opt;
        opt.rays = cfg.pack_free_rays;
        opt.seed = derived_seed(cfg.seed, 1);
        opt.workers = cfg.workers;
        r.pack_free = simulate_1d_one_sided({beta, r.fit->mu_mle, theta, std::nullopt}, opt);
      }))
    return r;

  if (beta > 0.0 && cfg.audit_walks > 0) {
    stage(r, "audit", [&] {
      SimulationOptions opt;
      opt.rays = cfg.audit_walks;
      opt.seed = derived_seed(cfg.seed, 2);
      opt.workers = cfg.workers;
      r.audit = wald_step_audit(StepDistribution::exponential(r.fit->mu_mle), beta, opt);
    });
  }
  return r;
}

namespace {

void kv(std::ostream& out, const char* key, const std::string& value) {
  out << key << ',' << value << '\n';
}

std::string opt_value(const std::optional<double>& v) { return v ? format_value(*v) : std::string(); }

}  // namespace

void write_pipeline_csv(std::ostream& out, const PipelineConfig& cfg, const PipelineResult& r) {
  out << "key,value\n";
  kv(out, "seed", std::to_string(cfg.seed));
  kv(out, "beta", format_value(cfg.trace.beta));
  kv(out, "theta_deg", format_value(cfg.trace.theta * 180.0 / std::numbers::pi));
  kv(out, "bed_radius", format_value(cfg.bed.radius));
  kv(out, "bed_vf", format_value(cfg.bed.volume_fraction));
  kv(out, "bed_width", format_value(cfg.bed.width));
  kv(out, "bed_depth", format_value(cfg.bed.depth));
  kv(out, "particles", std::to_string(r.particles));
  kv(out, "n_rays", std::to_string(r.mcrt.n_rays));
  kv(out, "rho_mcrt", format_value(r.mcrt.rho));
  kv(out, "rho_mcrt_stderr", format_value(r.mcrt.rho_stderr));
  kv(out, "tau_mcrt", format_value(r.mcrt.tau));
  kv(out, "absorbed_mcrt", format_value(r.mcrt.absorbed));
  kv(out, "censored_mcrt", std::to_string(r.mcrt.censored));
  kv(out, "non_scattering", r.non_scattering ? "1" : "0");
  kv(out, "n_free_paths", std::to_string(r.free_paths.size()));
  kv(out, "mu_mle", r.fit ? format_value(r.fit->mu_mle) : "");
  kv(out, "mu_ls", r.fit ? format_value(r.fit->mu_ls) : "");
  kv(out, "ks_stat", r.fit ? format_value(r.fit->ks_stat) : "");
  kv(out, "rho_hat_mle", opt_value(r.rho_hat_mle));
  kv(out, "rho_hat_ls", opt_value(r.rho_hat_ls));
  kv(out, "rho_pack_free", r.pack_free ? format_value(r.pack_free->rho) : "");
  kv(out, "rho_pack_free_stderr", r.pack_free ? format_value(r.pack_free->rho_stderr) : "");
  kv(out, "relative_error", opt_value(r.relative_error));
  kv(out, "wald_gap", r.audit ? format_value(r.audit->relative_gap) : "");
  kv(out, "error_stage", r.error ? r.error->stage : "");
}

void write_pipeline_report(std::ostream& out, const PipelineConfig& cfg, const PipelineResult& r) {
  out << "bed: " << r.particles << " particles, radius " << format_value(cfg.bed.radius) << ", "
      << format_value(cfg.bed.width) << " x " << format_value(cfg.bed.depth)
      << (cfg.bed.periodic ? ", periodic" : "") << ", seed " << cfg.bed.seed << '\n';
  out << "2-D ray tracing: " << r.mcrt.n_rays << " rays, rho = " << format_value(r.mcrt.rho)
      << " +- " << format_value(r.mcrt.rho_stderr) << ", tau = " << format_value(r.mcrt.tau)
      << ", absorbed = " << format_value(r.mcrt.absorbed) << ", censored = " << r.mcrt.censored
      << '\n';
  if (r.non_scattering) out << "non-scattering medium: no ray hit a particle; nothing to fit\n";
  if (r.fit) {
    out << "free paths: " << r.fit->n_samples << ", mu_mle = " << format_value(r.fit->mu_mle)
        << ", mu_ls = " << format_value(r.fit->mu_ls) << ", KS = " << format_value(r.fit->ks_stat)
        << '\n';
  }
  if (r.rho_hat_mle)
    out << "rho_hat(mu_mle) = " << format_value(*r.rho_hat_mle)
        << ", rho_hat(mu_ls) = " << format_value(*r.rho_hat_ls) << '\n';
  if (r.relative_error)
    out << "relative error vs 2-D tracing: " << format_value(*r.relative_error) << '\n';
  if (r.pack_free)
    out << "1-D walk simulation at mu_mle: rho = " << format_value(r.pack_free->rho) << " +- "
        << format_value(r.pack_free->rho_stderr) << '\n';
  if (r.audit)
    out << "Wald-step audit at mu_mle: E[exp(-2 beta L)] = " << format_value(r.audit->discounted_travel)
        << ", E[alpha^T] = " << format_value(r.audit->discounted_steps)
        << ", relative gap = " << format_value(r.audit->relative_gap) << '\n';
  if (r.error) out << "stage '" << r.error->stage << "' failed: " << r.error->message << '\n';
}

}  // namespace renewrt
