#include "renewrt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "renewrt/config_file.hpp"
#include "renewrt/error.hpp"
#include "renewrt/estimators.hpp"
#include "renewrt/fitting.hpp"
#include "renewrt/pack_free.hpp"
#include "renewrt/pipeline.hpp"
#include "renewrt/sweep.hpp"
#include "renewrt/tracer.hpp"
#include "renewrt/validation.hpp"

namespace renewrt::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  double beta = 0.0;
  double mu = 1.0;
  double theta_deg = 0.0;
  double h = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double epsilon = 0.0;
  std::string out;
  std::string config;

  mcrt::BedSpec bed;
  std::string bed_in;
  std::string bed_out;
  std::string flux_out;
  bool lambertian = false;
  std::uint64_t pack_free_n = 1'000'000;

  std::string input;
  std::size_t bins = 50;

  std::string sweep_case = "one-sided";
  double from = 0.05;
  double to = 1.0;
  double step = 0.05;
  std::vector<double> values;
  bool mc = false;

  double scale = 1.0;
  std::vector<int> criteria;
};

void add_theta(CLI::App* s, Params& p) {
  s->add_option("--theta-deg", p.theta_deg, "incidence angle from the normal, degrees in [0, 90)");
}

void add_seed_workers(CLI::App* s, Params& p) {
  s->add_option("--seed", p.seed, "random seed (generated and printed when omitted)");
  s->add_option("--workers", p.workers, "worker threads")->check(CLI::PositiveNumber);
}

void add_bed(CLI::App* s, Params& p) {
  s->add_option("--bed-radius", p.bed.radius, "particle radius")->capture_default_str();
  s->add_option("--bed-vf", p.bed.volume_fraction, "target covered-area fraction")->capture_default_str();
  s->add_option("--bed-width", p.bed.width, "bed width (periodic)")->capture_default_str();
  s->add_option("--bed-depth", p.bed.depth, "bed depth")->capture_default_str();
  s->add_option("--bed-in", p.bed_in, "read the bed from this file instead of generating it");
  s->add_option("--bed-out", p.bed_out, "write the bed to this file");
  s->add_flag("--lambertian", p.lambertian, "cosine-weighted re-emission instead of uniform");
}

double theta_rad(const Params& p) {
  detail::require(p.theta_deg >= 0.0 && p.theta_deg < 90.0, "--theta-deg must lie in [0, 90)");
  return p.theta_deg * kDeg;
}

// Runs `fn` on `path`, or on `fallback` when the path is empty or "-".
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  fn(f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  return f;
}

std::uint64_t resolve_seed(CLI::App* s, Params& p, std::ostream& err) {
  if (s->count("--seed") == 0) {
    std::random_device rd;
    p.seed = ((static_cast<std::uint64_t>(rd()) << 32) | rd()) >> 1;
    err << "generated seed " << p.seed << " (pass --seed " << p.seed << " to reproduce)\n";
  }
  return p.seed;
}

void kv(std::ostream& out, const char* key, double v) { out << key << " = " << format_value(v) << '\n'; }
void kv(std::ostream& out, const char* key, std::uint64_t v) { out << key << " = " << v << '\n'; }

void print_tally(std::ostream& out, const TallyResult& t) {
  kv(out, "n_rays", t.n_rays);
  kv(out, "rho", t.rho);
  kv(out, "rho_stderr", t.rho_stderr);
  kv(out, "tau", t.tau);
  kv(out, "absorbed", t.absorbed);
  kv(out, "censored", t.censored);
}

int cmd_estimate(CLI::App* s, Params& p, std::ostream& out) {
  const double theta = theta_rad(p);
  detail::require(p.mu > 0.0, "--mu must be > 0");
  if (s->count("--h")) {
    if (s->count("--beta") && p.beta != 0.0)
      throw InvalidArgument("--h selects the non-attenuating two-sided bed; it conflicts with --beta");
    if (s->count("--epsilon")) throw InvalidArgument("--epsilon applies to the one-sided estimate only");
    const double rho = rho_two_sided(p.mu, p.h, theta);
    with_output(p.out, out, [&](std::ostream& o) {
      kv(o, "h_mu", p.h * p.mu);
      kv(o, "rho_hat", rho);
      kv(o, "tau", 1.0 - rho);
    });
    return kOk;
  }
  const MediumParams m{p.beta, p.mu, theta, std::nullopt};
  m.validate();
  const EstimateResult est = estimate_one_sided(m);
  const double rho = s->count("--epsilon")
                         ? rho_hat_general(StepDistribution::exponential(p.mu), p.beta, theta, p.epsilon)
                         : est.rho_hat;
  std::string refusal;
  if (!est.upper_valid) {
    try {
      rho_upper_exponential(m);
    } catch (const ValidityError& e) {
      refusal = e.what();
    }
  }
  with_output(p.out, out, [&](std::ostream& o) {
    kv(o, "eta", m.eta());
    kv(o, "rho_hat", rho);
    if (est.upper_valid)
      kv(o, "rho_upper", *est.rho_upper);
    else
      o << "rho_upper = refused: " << refusal << '\n';
    if (est.clamped) o << "note = rho_hat clamped to [0, 1]\n";
  });
  return kOk;
}

int cmd_simulate_1d(CLI::App* s, Params& p, std::ostream& out, std::ostream& err) {
  const double theta = theta_rad(p);
  SimulationOptions opt;
  opt.rays = p.n;
  opt.workers = p.workers;
  opt.seed = resolve_seed(s, p, err);
  TallyResult t;
  std::optional<double> reference;
  if (s->count("--h")) {
    if (s->count("--beta") && p.beta != 0.0)
      throw InvalidArgument("--h selects the non-attenuating two-sided bed; it conflicts with --beta");
    t = simulate_1d_two_sided(p.mu, p.h, theta, opt);
    reference = rho_two_sided(p.mu, p.h, theta);
  } else {
    const MediumParams m{p.beta, p.mu, theta, std::nullopt};
    t = simulate_1d_one_sided(m, opt);
    reference = rho_hat_exponential(m);
  }
  with_output(p.out, out, [&](std::ostream& o) {
    print_tally(o, t);
    kv(o, "rho_hat", *reference);
    kv(o, "seed", opt.seed);
  });
  return kOk;
}

mcrt::BedGeometry load_or_build_bed(const Params& p) {
  if (!p.bed_in.empty()) {
    auto f = open_input(p.bed_in);
    return mcrt::read_bed(f);
  }
  return mcrt::build_bed(p.bed);
}

void save_bed(const Params& p, const mcrt::BedGeometry& bed) {
  if (p.bed_out.empty()) return;
  std::ofstream f(p.bed_out);
  if (!f) throw IoError("cannot open '" + p.bed_out + "' for writing");
  mcrt::write_bed(f, bed);
}

int cmd_simulate_2d(CLI::App* s, Params& p, std::ostream& out, std::ostream& err) {
  mcrt::TraceOptions to;
  to.beta = p.beta;
  to.theta = theta_rad(p);
  to.law = p.lambertian ? mcrt::ScatterLaw::LambertianCosine : mcrt::ScatterLaw::HemisphericUniform;
  SimulationOptions opt;
  opt.rays = p.n;
  opt.workers = p.workers;
  opt.seed = resolve_seed(s, p, err);
  p.bed.seed = opt.seed;
  const mcrt::BedGeometry bed = load_or_build_bed(p);
  save_bed(p, bed);
  const mcrt::Simulation2dResult r = mcrt::simulate_2d(bed, to, opt);
  if (!p.out.empty()) with_output(p.out, out, [&](std::ostream& o) { fitting::write_samples(o, r.free_paths); });
  if (!p.flux_out.empty()) {
    with_output(p.flux_out, out, [&](std::ostream& o) {
      o << "depth_lo,depth_hi,flux,net_upward\n";
      for (std::size_t k = 0; k < r.flux.flux.size(); ++k)
        o << format_value(r.flux.bin_edges[k]) << ',' << format_value(r.flux.bin_edges[k + 1]) << ','
          << format_value(r.flux.flux[k]) << ',' << format_value(r.flux.net_upward[k]) << '\n';
    });
  }
  kv(out, "particles", static_cast<std::uint64_t>(bed.centers().size()));
  print_tally(out, r.tally);
  kv(out, "n_free_paths", static_cast<std::uint64_t>(r.free_paths.size()));
  if (r.free_paths.size() >= 2) kv(out, "mu_mle", fitting::fit_mle(r.free_paths));
  kv(out, "seed", opt.seed);
  return kOk;
}

int cmd_fit(Params& p, std::ostream& out) {
  if (p.input.empty()) throw InvalidArgument("fit needs a sample file");
  auto f = open_input(p.input);
  const std::vector<double> samples = fitting::read_samples(f);
  const fitting::ExpFit fit = fitting::fit_exponential(samples, p.bins);
  kv(out, "n_samples", static_cast<std::uint64_t>(fit.n_samples));
  kv(out, "mu_mle", fit.mu_mle);
  kv(out, "mu_ls", fit.mu_ls);
  kv(out, "ks_stat", fit.ks_stat);
  if (!p.out.empty()) {
    with_output(p.out, out, [&](std::ostream& o) {
      o << "bin_lo,bin_hi,density,pdf_mle,pdf_ls\n";
      const auto& h = fit.histogram;
      for (std::size_t k = 0; k < h.density.size(); ++k) {
        const double c = h.centers[k];
        o << format_value(h.edges[k]) << ',' << format_value(h.edges[k + 1]) << ','
          << format_value(h.density[k]) << ',' << format_value(fit.mu_mle * std::exp(-fit.mu_mle * c))
          << ',' << format_value(fit.mu_ls * std::exp(-fit.mu_ls * c)) << '\n';
      }
    });
  }
  return kOk;
}

int cmd_sweep(CLI::App* s, Params& p, std::ostream& out, std::ostream& err) {
  SweepConfig cfg;
  if (p.sweep_case == "one-sided")
    cfg.kind = SweepCase::OneSided;
  else if (p.sweep_case == "two-sided")
    cfg.kind = SweepCase::TwoSided;
  else
    throw InvalidArgument("--case must be one-sided or two-sided");
  if (s->count("--values")) {
    if (s->count("--from") || s->count("--to") || s->count("--step"))
      throw InvalidArgument("--values conflicts with --from/--to/--step");
    cfg.values = p.values;
  } else {
    cfg.values = sweep_range(p.from, p.to, p.step);
  }
  if (cfg.kind == SweepCase::TwoSided && s->count("--epsilon"))
    throw InvalidArgument("--epsilon applies to the one-sided sweep only");
  cfg.mu = p.mu;
  cfg.theta_deg = p.theta_deg;
  theta_rad(p);
  if (s->count("--epsilon")) cfg.epsilon = p.epsilon;
  cfg.monte_carlo = p.mc;
  cfg.rays = p.n;
  cfg.workers = p.workers;
  if (p.mc) cfg.seed = resolve_seed(s, p, err);
  const auto rows = run_sweep(cfg);
  with_output(p.out, out, [&](std::ostream& o) { write_sweep_csv(o, rows); });
  return kOk;
}

int cmd_pipeline(CLI::App* s, Params& p, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  cfg.bed = p.bed;
  cfg.trace.beta = p.beta;
  cfg.trace.theta = theta_rad(p);
  cfg.trace.law = p.lambertian ? mcrt::ScatterLaw::LambertianCosine : mcrt::ScatterLaw::HemisphericUniform;
  cfg.rays = p.n;
  cfg.pack_free_rays = p.pack_free_n;
  cfg.audit_walks = p.pack_free_n;
  cfg.workers = p.workers;
  cfg.seed = resolve_seed(s, p, err);
  cfg.bed.seed = cfg.seed;
  cfg.bins = p.bins;
  const PipelineResult r = run_pipeline_2d(cfg);
  write_pipeline_report(out, cfg, r);
  if (!p.out.empty()) with_output(p.out, out, [&](std::ostream& o) { write_pipeline_csv(o, cfg, r); });
  if (r.error) return r.error->stage == "bed" ? kUsage : kNumerical;
  return kOk;
}

int cmd_validate(CLI::App* s, Params& p, std::ostream& out) {
  ValidationOptions opt;
  if (s->count("--seed")) opt.seed = p.seed;
  opt.workers = p.workers;
  opt.scale = p.scale;
  opt.criteria = p.criteria;
  out << "seed " << opt.seed << '\n';
  const ValidationReport r = run_validation(opt);
  write_validation_text(out, r);
  if (!p.out.empty()) {
    with_output(p.out + ".txt", out, [&](std::ostream& o) { write_validation_text(o, r); });
    with_output(p.out + ".csv", out, [&](std::ostream& o) { write_validation_csv(o, r); });
  }
  return r.passed() ? kOk : kAcceptance;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"Reflectivity of porous media from renewal random walks"};
  app.require_subcommand(1);
  // `--h` is the bed height, so help gets no short alias.
  app.set_help_flag("--help", "print this help and exit");
  app.set_help_all_flag("--help-all", "show help for every command");

  auto* estimate = app.add_subcommand("estimate", "closed-form reflectivity estimates");
  estimate->add_option("--beta", p.beta, "dissipation factor beta");
  estimate->add_option("--mu", p.mu, "free-path rate mu")->capture_default_str();
  add_theta(estimate, p);
  estimate->add_option("--h", p.h, "bed height: selects the two-sided bed");
  estimate->add_option("--epsilon", p.epsilon, "finite delta-method step")->check(CLI::PositiveNumber);
  estimate->add_option("--out", p.out, "output file");

  auto* sim1 = app.add_subcommand("simulate-1d", "walk simulation of the homogenized slab");
  sim1->add_option("--beta", p.beta, "dissipation factor beta");
  sim1->add_option("--mu", p.mu, "free-path rate mu")->capture_default_str();
  add_theta(sim1, p);
  sim1->add_option("--h", p.h, "bed height: selects the two-sided bed");
  sim1->add_option("--n", p.n, "rays")->default_val(1'000'000);
  add_seed_workers(sim1, p);
  sim1->add_option("--out", p.out, "output file");

  auto* sim2 = app.add_subcommand("simulate-2d", "ray tracing through a random bed of circles");
  sim2->add_option("--beta", p.beta, "dissipation factor beta")->default_val(1.0);
  add_theta(sim2, p);
  sim2->add_option("--n", p.n, "rays")->default_val(100'000);
  add_seed_workers(sim2, p);
  add_bed(sim2, p);
  sim2->add_option("--out", p.out, "write free paths, one per line");
  sim2->add_option("--flux-out", p.flux_out, "write the depth flux profile as CSV");

  auto* fit = app.add_subcommand("fit", "fit an exponential to free-path samples");
  fit->add_option("input", p.input, "sample file, one value per line")->required();
  fit->add_option("--bins", p.bins, "histogram bins")->capture_default_str();
  fit->add_option("--out", p.out, "write the histogram and fitted densities as CSV");

  auto* sweep = app.add_subcommand("sweep", "CSV sweep over eta or h mu");
  sweep->add_option("--case", p.sweep_case, "one-sided (eta) or two-sided (h mu)")->capture_default_str();
  sweep->add_option("--from", p.from, "first value")->capture_default_str();
  sweep->add_option("--to", p.to, "last value")->capture_default_str();
  sweep->add_option("--step", p.step, "step")->capture_default_str();
  sweep->add_option("--values", p.values, "explicit values")->delimiter(',');
  sweep->add_flag("--mc", p.mc, "add a walk simulation per row");
  sweep->add_option("--mu", p.mu, "free-path rate mu")->capture_default_str();
  add_theta(sweep, p);
  sweep->add_option("--epsilon", p.epsilon, "finite delta-method step")->check(CLI::PositiveNumber);
  sweep->add_option("--n", p.n, "rays per row")->default_val(100'000);
  add_seed_workers(sweep, p);
  sweep->add_option("--out", p.out, "output CSV (default stdout)");

  auto* pipe = app.add_subcommand("pipeline-2d", "bed, tracing, fit and estimate end to end");
  pipe->add_option("--beta", p.beta, "dissipation factor beta")->default_val(1.0);
  add_theta(pipe, p);
  pipe->add_option("--n", p.n, "2-D rays")->default_val(100'000);
  pipe->add_option("--pack-free-n", p.pack_free_n, "rays for the 1-D check")->capture_default_str();
  pipe->add_option("--bins", p.bins, "histogram bins")->capture_default_str();
  add_seed_workers(pipe, p);
  add_bed(pipe, p);
  pipe->add_option("--out", p.out, "write key,value CSV");

  auto* validate = app.add_subcommand("validate", "run the acceptance checks");
  add_seed_workers(validate, p);
  validate->add_option("--scale", p.scale, "multiply every sample size")->check(CLI::PositiveNumber);
  validate->add_option("--criteria", p.criteria, "only these criteria")->delimiter(',');
  validate->add_option("--out", p.out, "write <out>.txt and <out>.csv");

  for (auto* s : app.get_subcommands({}))
    s->add_option("--config", p.config, "key = value file; flags override it");

  std::vector<std::string> merged = args;
  try {
    if (const auto path = find_config(args)) {
      auto f = open_input(*path);
      const auto entries = parse_config(f);
      CLI::App* sub = nullptr;
      if (!args.empty()) {
        for (auto* s : app.get_subcommands({}))
          if (s->get_name() == args.front()) sub = s;
      }
      if (!sub) throw InvalidArgument("--config needs a command before it");
      for (const auto& e : entries) {
        const std::string flag = "--" + e.key;
        if (e.key == "config" || !sub->get_option_no_throw(flag))
          throw InvalidArgument("config line " + std::to_string(e.line) + ": unknown key '" + e.key +
                                "' for command " + sub->get_name());
        if (!flag_given(args, flag)) merged.push_back(flag + "=" + e.value);
      }
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*estimate) return cmd_estimate(estimate, p, out);
    if (*sim1) return cmd_simulate_1d(sim1, p, out, err);
    if (*sim2) return cmd_simulate_2d(sim2, p, out, err);
    if (*fit) return cmd_fit(p, out);
    if (*sweep) return cmd_sweep(sweep, p, out, err);
    if (*pipe) return cmd_pipeline(pipe, p, out, err);
    if (*validate) return cmd_validate(validate, p, out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidityError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace renewrt::cli
