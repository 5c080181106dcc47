#include "renewrt/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "renewrt/cramer_lundberg.hpp"
#include "renewrt/error.hpp"
#include "renewrt/estimators.hpp"
#include "renewrt/parallel.hpp"
#include "renewrt/pipeline.hpp"
#include "renewrt/sweep.hpp"

namespace renewrt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) { return std::isnan(v) ? std::string() : format_value(v); }

std::string exact(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

class Runner {
 public:
  explicit Runner(const ValidationOptions& opt) : opt_(opt) {
    if (!opt_.rho_two_sided)
      opt_.rho_two_sided = [](double mu, double h, double th) { return rho_two_sided(mu, h, th); };
  }

  ValidationReport run() {
    auto wanted = [&](int id) {
      return opt_.criteria.empty() ||
             std::find(opt_.criteria.begin(), opt_.criteria.end(), id) != opt_.criteria.end();
    };
    using Fn = void (Runner::*)();
    const std::array<Fn, kCriteriaCount> fns{&Runner::c1, &Runner::c2, &Runner::c3,
                                             &Runner::c4, &Runner::c5, &Runner::c6,
                                             &Runner::c7, &Runner::c8, &Runner::c9};
    for (int id = 1; id <= kCriteriaCount; ++id)
      if (wanted(id)) guarded(id, fns[static_cast<std::size_t>(id - 1)]);
    return std::move(report_);
  }

 private:
  std::uint64_t samples(double base) const {
    return std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(std::llround(base * opt_.scale)));
  }

  std::uint64_t seed(std::uint64_t tag) const { return opt_.seed + tag * 0x9E3779B97F4A7C15ull; }

  SimulationOptions sim(double base_rays, std::uint64_t tag) const {
    SimulationOptions s;
    s.rays = samples(base_rays);
    s.seed = seed(tag);
    s.workers = opt_.workers;
    return s;
  }

  void row(int c, std::string point, double measured, double expected, double tol, bool ok,
           std::uint64_t censored = 0) {
    report_.rows.push_back({c, std::move(point), measured, expected, tol, ok, censored});
  }

  void tally(const std::string& label, const TallyResult& t) { tallies_.emplace_back(label, t); }

  // Summarizes the rows of criterion `id` into one result.
  void close(int id, std::string title, std::string extra = {}) {
    CriterionResult c;
    c.id = id;
    c.title = std::move(title);
    std::size_t total = 0, ok = 0;
    const CheckRow* first_fail = nullptr;
    for (const auto& r : report_.rows) {
      if (r.criterion != id) continue;
      ++total;
      c.censored += r.censored;
      if (r.passed)
        ++ok;
      else if (!first_fail)
        first_fail = &r;
    }
    c.passed = total > 0 && ok == total;
    std::ostringstream s;
    s << ok << "/" << total << " checks";
    if (first_fail)
      s << "; first failure " << first_fail->point << ": measured " << fmt(first_fail->measured)
        << ", expected " << fmt(first_fail->expected) << ", tolerance " << fmt(first_fail->tolerance);
    if (!extra.empty()) s << "; " << extra;
    c.summary = s.str();
    report_.criteria.push_back(std::move(c));
  }

  void guarded(int id, void (Runner::*fn)()) {
    try {
      (this->*fn)();
    } catch (const std::exception& e) {
      CriterionResult c;
      c.id = id;
      c.title = "criterion " + std::to_string(id);
      c.summary = std::string("aborted: ") + e.what();
      report_.criteria.push_back(std::move(c));
    }
  }

  // Two-sided closed form against the two-sided walk simulation.
  void c1() {
    std::uint64_t tag = 100;
    for (double hmu : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      for (double deg : {0.0, 30.0, 60.0}) {
        const TallyResult t = simulate_1d_two_sided(1.0, hmu, deg * kDeg, sim(1e6, ++tag));
        tally("two-sided hmu=" + fmt(hmu) + " theta=" + fmt(deg), t);
        const double expected = opt_.rho_two_sided(1.0, hmu, deg * kDeg);
        const double tol = std::max(3.0 * t.rho_stderr, 0.003);
        row(1, "hmu=" + fmt(hmu) + " theta_deg=" + fmt(deg), t.rho, expected, tol,
            std::abs(t.rho - expected) < tol, t.censored);
      }
    }
    close(1, "two-sided reflectivity closed form vs walk simulation");
  }

  // One-sided estimate against the one-sided simulation, plus the error curve.
  void c2() {
    std::uint64_t tag = 200;
    double worst = 0.0;
    for (double eta : {0.05, 0.1, 0.2, 0.5, 1.0}) {
      const MediumParams m{eta, 1.0, 0.0, std::nullopt};
      const TallyResult t = simulate_1d_one_sided(m, sim(1e7, ++tag));
      tally("one-sided eta=" + fmt(eta), t);
      const double hat = rho_hat_exponential(m);
      const double rel = std::abs(t.rho - hat) / t.rho;
      worst = std::max(worst, rel);
      row(2, "eta=" + fmt(eta), t.rho, hat, 0.01 * t.rho, rel < 0.01, t.censored);
    }
    if (opt_.error_curve) {
      for (double eta : sweep_range(0.01, 2.0, 0.05)) {
        const MediumParams m{eta, 1.0, 0.0, std::nullopt};
        const TallyResult t = simulate_1d_one_sided(m, sim(1e5, ++tag));
        tally("error curve eta=" + fmt(eta), t);
        ErrorCurvePoint p;
        p.eta = eta;
        p.rho_hat = rho_hat_exponential(m);
        p.rho_mc = t.rho;
        p.rho_mc_stderr = t.rho_stderr;
        p.relative_error = std::abs(t.rho - p.rho_hat) / t.rho;
        report_.error_curve.push_back(p);
      }
    }
    if (opt_.wald_audit) {
      for (double eta : {0.1, 0.5, 1.0})
        report_.audits.push_back(
            wald_step_audit(StepDistribution::exponential(1.0), eta, sim(1e7, ++tag)));
    }
    close(2, "one-sided estimate within 1% of walk simulation",
          "max relative error " + fmt(worst));
  }

  // Upper-bound dominance and refusal outside the near field.
  void c3() {
    std::uint64_t tag = 300;
    for (double eta : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
      const MediumParams m{eta, 1.0, 0.0, std::nullopt};
      const TallyResult t = simulate_1d_one_sided(m, sim(1e6, ++tag));
      tally("bound eta=" + fmt(eta), t);
      const double upper = rho_upper_exponential(m);
      const double hat = rho_hat_exponential(m);
      row(3, "eta=" + fmt(eta) + " rho_mc<=rho_upper+3se", t.rho, upper, 3.0 * t.rho_stderr,
          t.rho <= upper + 3.0 * t.rho_stderr, t.censored);
      row(3, "eta=" + fmt(eta) + " rho_hat<=rho_upper", hat, upper, 0.0, hat <= upper);
    }
    for (double eta : {0.5, 1.0, 2.0}) {
      bool refused = false;
      try {
        rho_upper_exponential({eta, 1.0, 0.0, std::nullopt});
      } catch (const ValidityError& e) {
        refused = std::string(e.what()).find("mu > 2*beta") != std::string::npos;
      }
      row(3, "eta=" + fmt(eta) + " refusal", kNaN, kNaN, kNaN, refused);
    }
    close(3, "upper bound dominates and refuses for mu <= 2 beta");
  }

  // Analytic one-sided transform against discounted walks.
  void c4() {
    const std::array<double, 3> alphas{0.3, 0.6, 0.9};
    const std::array<double, 2> zetas{0.0, 1.0};
    const std::array<double, 4> xs{0.0, 0.5, 1.0, 2.0};
    // alpha^T below 1e-17 beyond this many steps for every alpha on the grid.
    const auto horizon = static_cast<std::uint64_t>(std::ceil(std::log(1e-17) / std::log(0.9)));

    struct Case {
      std::string name;
      StepDistribution dist;
    };
    Eigen::VectorXd w(2), r(2);
    w << 0.5, 0.5;
    r << 1.0, 2.0;
    const std::array<Case, 2> cases{Case{"exp(1)", StepDistribution::exponential(1.0)},
                                    Case{"hyperexp(0.5,0.5;1,2)",
                                         StepDistribution::hyperexponential(w, r)}};
    std::uint64_t tag = 400;
    for (const auto& cs : cases) {
      for (double x : xs) {
        constexpr std::size_t K = 6;
        struct Partial {
          std::array<double, K> sum{};
          std::array<double, K> sq{};
          std::uint64_t unfinished = 0;
        };
        const SimulationOptions s = sim(1e6, ++tag);
        auto chunks = run_chunked<Partial>(
            s.rays, s.seed, s.workers,
            [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
              Partial p;
              WalkConfig cfg;
              cfg.start = x;
              cfg.step = cs.dist;
              cfg.max_steps = horizon;
              for (std::uint64_t i = first; i < last; ++i) {
                const WalkOutcome o = sample_walk(cfg, rng);
                if (!o.exited()) {
                  ++p.unfinished;
                  continue;
                }
                for (std::size_t a = 0; a < alphas.size(); ++a)
                  for (std::size_t z = 0; z < zetas.size(); ++z) {
                    const double v = std::pow(alphas[a], static_cast<double>(o.steps)) *
                                     std::exp(-zetas[z] * o.overshoot_below);
                    p.sum[a * 2 + z] += v;
                    p.sq[a * 2 + z] += v * v;
                  }
              }
              return p;
            });
        Partial total;
        for (const auto& c : chunks) {
          for (std::size_t k = 0; k < K; ++k) {
            total.sum[k] += c.sum[k];
            total.sq[k] += c.sq[k];
          }
          total.unfinished += c.unfinished;
        }
        const double n = static_cast<double>(s.rays);
        for (std::size_t a = 0; a < alphas.size(); ++a)
          for (std::size_t z = 0; z < zetas.size(); ++z) {
            const double mean = total.sum[a * 2 + z] / n;
            const double var = std::max(0.0, total.sq[a * 2 + z] / n - mean * mean) * n / (n - 1.0);
            const double se = std::sqrt(var / n);
            const double analytic = mgf_one_sided(cs.dist, x, alphas[a], zetas[z]);
            row(4,
                cs.name + " x=" + fmt(x) + " alpha=" + fmt(alphas[a]) + " zeta=" + fmt(zetas[z]),
                mean, analytic, 3.0 * se, std::abs(mean - analytic) < 3.0 * se, total.unfinished);
          }
      }
    }
    close(4, "one-sided walk transform: closed form vs simulation",
          "walks past the discount horizon count as 0 and are listed as censored");
  }

  // Two-sided overshoot means and exit probability.
  void c5() {
    const StepDistribution dist = StepDistribution::exponential(1.0);
    std::uint64_t tag = 500;
    for (double h : {1.0, 4.0}) {
      const TwoSidedSolution exit_bottom = two_sided_coefficients(dist, h, 1.0, 0.0, 0.0, 1.0, 0.0);
      for (double frac : {0.1, 0.5, 0.9}) {
        const double x0 = frac * h;
        struct Partial {
          std::uint64_t bottom = 0, top = 0, unfinished = 0;
          double zb = 0.0, zb2 = 0.0, zt = 0.0, zt2 = 0.0;
        };
        const SimulationOptions s = sim(1e6, ++tag);
        auto chunks = run_chunked<Partial>(
            s.rays, s.seed, s.workers,
            [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
              Partial p;
              WalkConfig cfg;
              cfg.start = x0;
              cfg.step = dist;
              cfg.barrier = TwoSided{h};
              for (std::uint64_t i = first; i < last; ++i) {
                const WalkOutcome o = sample_walk(cfg, rng);
                if (!o.exited()) {
                  ++p.unfinished;
                } else if (o.exit == ExitSide::Bottom) {
                  ++p.bottom;
                  p.zb += o.overshoot_below;
                  p.zb2 += o.overshoot_below * o.overshoot_below;
                } else {
                  ++p.top;
                  p.zt += o.overshoot_above;
                  p.zt2 += o.overshoot_above * o.overshoot_above;
                }
              }
              return p;
            });
        Partial t;
        for (const auto& c : chunks) {
          t.bottom += c.bottom;
          t.top += c.top;
          t.unfinished += c.unfinished;
          t.zb += c.zb;
          t.zb2 += c.zb2;
          t.zt += c.zt;
          t.zt2 += c.zt2;
        }
        const std::string where = "h=" + fmt(h) + " x0=" + fmt(x0);
        auto mean_check = [&](const char* what, std::uint64_t k, double s1, double s2) {
          const double nk = static_cast<double>(k);
          const double mean = s1 / nk;
          const double se = std::sqrt(std::max(0.0, s2 / nk - mean * mean) / nk);
          row(5, where + " " + what, mean, 1.0, 3.0 * se, std::abs(mean - 1.0) < 3.0 * se,
              t.unfinished);
        };
        mean_check("E[Z-|bottom]", t.bottom, t.zb, t.zb2);
        mean_check("E[Z+|top]", t.top, t.zt, t.zt2);
        const double n = static_cast<double>(s.rays);
        const double p_mc = static_cast<double>(t.bottom) / n;
        const double p_exact = exit_bottom.evaluate(x0);
        const double se = std::sqrt(p_mc * (1.0 - p_mc) / n);
        row(5, where + " P(bottom)", p_mc, p_exact, 3.0 * se, std::abs(p_mc - p_exact) < 3.0 * se,
            t.unfinished);
      }
    }
    close(5, "two-sided overshoot means and exit probability");
  }

  // One-sided overshoot is Exp(mu).
  void c6() {
    const double mu = 1.0;
    const StepDistribution dist = StepDistribution::exponential(mu);
    struct Partial {
      std::uint64_t n = 0, unfinished = 0;
      std::array<double, 4> m{};
    };
    // The overshoot of an exponential step is independent of the exit time,
    // so stopping very long walks leaves the law of the recorded ones intact.
    const std::uint64_t step_cap = 100'000;
    const SimulationOptions s = sim(1e6, 600);
    auto chunks = run_chunked<Partial>(
        s.rays, s.seed, s.workers,
        [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
          Partial p;
          WalkConfig cfg;
          cfg.start = 1.0 / mu;
          cfg.step = dist;
          cfg.max_steps = step_cap;
          for (std::uint64_t i = first; i < last; ++i) {
            const WalkOutcome o = sample_walk(cfg, rng);
            if (!o.exited()) {
              ++p.unfinished;
              continue;
            }
            ++p.n;
            double z = o.overshoot_below;
            double pw = z;
            for (double& mk : p.m) {
              mk += pw;
              pw *= z;
            }
          }
          return p;
        });
    Partial t;
    for (const auto& c : chunks) {
      t.n += c.n;
      t.unfinished += c.unfinished;
      for (std::size_t k = 0; k < 4; ++k) t.m[k] += c.m[k];
    }
    const double n = static_cast<double>(t.n);
    const double e1 = t.m[0] / n, e2 = t.m[1] / n, e3 = t.m[2] / n, e4 = t.m[3] / n;
    const double var = e2 - e1 * e1;
    const double m4 = e4 - 4.0 * e1 * e3 + 6.0 * e1 * e1 * e2 - 3.0 * e1 * e1 * e1 * e1;
    const double se_mean = std::sqrt(var / n);
    const double se_var = std::sqrt(std::max(0.0, m4 - var * var) / n);
    row(6, "mean", e1, 1.0 / mu, 3.0 * se_mean, std::abs(e1 - 1.0 / mu) < 3.0 * se_mean,
        t.unfinished);
    row(6, "variance", var, 1.0 / (mu * mu), 3.0 * se_var,
        std::abs(var - 1.0 / (mu * mu)) < 3.0 * se_var, t.unfinished);
    close(6, "one-sided overshoot is Exp(mu)",
          "walks longer than " + std::to_string(step_cap) + " steps are censored");
  }

  // 2-D bed: exponential free paths and estimator accuracy.
  void c7() {
    PipelineConfig cfg;
    cfg.rays = samples(1e5);
    cfg.pack_free_rays = samples(1e6);
    cfg.audit_walks = samples(1e5);
    cfg.seed = seed(700);
    cfg.bed.seed = cfg.seed;
    cfg.workers = opt_.workers;
    const PipelineResult r = run_pipeline_2d(cfg);
    if (r.error) throw NumericalFailure("pipeline stage '" + r.error->stage + "': " + r.error->message);
    if (!r.fit || !r.relative_error) throw NumericalFailure("pipeline produced no fit");
    tally("2-D bed", r.mcrt);
    if (r.pack_free) tally("2-D pipeline 1-D check", *r.pack_free);
    row(7, "KS vs Exp(mu_mle), " + std::to_string(r.fit->n_samples) + " paths", r.fit->ks_stat, 0.0,
        0.05, r.fit->ks_stat < 0.05 && r.fit->n_samples >= 10'000, r.mcrt.censored);
    row(7, "rho_hat(mu_mle) vs rho_mcrt", *r.rho_hat_mle, r.mcrt.rho, 0.05 * r.mcrt.rho,
        *r.relative_error < 0.05, r.mcrt.censored);
    close(7, "2-D bed: exponential free paths, estimate within 5%",
          "mu_mle " + fmt(r.fit->mu_mle) + ", mu_ls " + fmt(r.fit->mu_ls) + ", rho_mcrt " +
              fmt(r.mcrt.rho) + " +- " + fmt(r.mcrt.rho_stderr) + ", rho_hat " +
              fmt(*r.rho_hat_mle) + ", relative error " + fmt(*r.relative_error));
  }

  static std::string tally_bytes(const TallyResult& t) {
    return std::to_string(t.n_rays) + ' ' + exact(t.rho) + ' ' + exact(t.tau) + ' ' +
           exact(t.absorbed) + ' ' + exact(t.rho_stderr) + ' ' + std::to_string(t.censored);
  }

  // Power conservation and worker-count independence.
  void c8() {
    std::uint64_t tag = 800;
    // Own tallies, so the criterion also stands alone.
    tally("one-sided eta=0.5", simulate_1d_one_sided({0.5, 1.0, 0.0, std::nullopt}, sim(1e5, ++tag)));
    tally("two-sided hmu=2 theta=45",
          simulate_1d_two_sided(1.0, 2.0, 45.0 * kDeg, sim(1e5, ++tag)));
    mcrt::BedSpec dense;
    dense.volume_fraction = 0.5;
    dense.width = 50.0;
    dense.depth = 10.0;
    dense.seed = seed(++tag);
    const mcrt::BedGeometry bed = mcrt::build_bed(dense);
    for (double beta : {0.0, 1.0}) {
      mcrt::TraceOptions to;
      to.beta = beta;
      tally("2-D dense bed beta=" + fmt(beta), mcrt::simulate_2d(bed, to, sim(2e4, tag)).tally);
    }
    for (const auto& [label, t] : tallies_) {
      const double err = t.conservation_error();
      row(8, "conservation " + label, err, 0.0, 1e-9, std::abs(err) <= 1e-9, t.censored);
    }

    auto sweep_csv = [&](SweepCase kind, std::vector<double> values, unsigned workers) {
      SweepConfig sc;
      sc.kind = kind;
      sc.values = std::move(values);
      sc.monte_carlo = true;
      sc.rays = 50'000;
      sc.seed = seed(890);
      sc.workers = workers;
      std::ostringstream s;
      write_sweep_csv(s, run_sweep(sc));
      return s.str();
    };
    const unsigned many = std::max(4u, opt_.workers);
    for (auto [kind, name] : {std::pair{SweepCase::OneSided, "one-sided"},
                              std::pair{SweepCase::TwoSided, "two-sided"}}) {
      const std::vector<double> values = kind == SweepCase::OneSided
                                             ? std::vector<double>{0.1, 0.5}
                                             : std::vector<double>{1.0, 5.0};
      const bool same = sweep_csv(kind, values, 1) == sweep_csv(kind, values, many);
      row(8, std::string("sweep CSV ") + name + " workers 1 vs " + std::to_string(many), kNaN, kNaN,
          kNaN, same);
    }
    mcrt::TraceOptions to;
    SimulationOptions a = sim(5e4, 899);
    a.rays = 50'000;
    SimulationOptions b = a;
    a.workers = 1;
    b.workers = many;
    const bool same2d =
        tally_bytes(mcrt::simulate_2d(bed, to, a).tally) == tally_bytes(mcrt::simulate_2d(bed, to, b).tally);
    row(8, "2-D tally workers 1 vs " + std::to_string(many), kNaN, kNaN, kNaN, same2d);
    close(8, "power conservation and worker-count determinism");
  }

  // Quadrature of the overshoot formula over the first-scattering depth.
  void c9() {
    CounterRng rng(opt_.seed, 0x9900);
    for (int i = 0; i < 10; ++i) {
      const double mu = 0.5 + 1.5 * rng.uniform();
      const double hmu = 0.1 + 19.9 * rng.uniform();
      const double theta = 80.0 * kDeg * rng.uniform();
      const double h = hmu / mu;
      const double reach = h / std::cos(theta);
      auto f = [&](double x) {
        return mu * std::exp(-mu * x) *
               rho_two_sided_from_overshoots(std::min(x, reach), h, 1.0 / mu, 1.0 / mu, theta);
      };
      // Rays with x cos(theta) > h pass through and add nothing to reflection.
      const double integral =
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, reach, 15, 1e-14);
      const double closed = opt_.rho_two_sided(mu, h, theta);
      row(9,
          "mu=" + fmt(mu) + " hmu=" + fmt(hmu) + " theta_deg=" + fmt(theta / kDeg),
          integral, closed, 1e-10, std::abs(integral - closed) < 1e-10);
    }
    close(9, "quadrature over first-scattering depth reproduces the closed form");
  }

  ValidationOptions opt_;
  ValidationReport report_;
  std::vector<std::pair<std::string, TallyResult>> tallies_;
};

}  // namespace

bool ValidationReport::passed() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

ValidationReport run_validation(const ValidationOptions& opt) {
  detail::require(opt.scale > 0.0, "validation scale must be > 0");
  detail::require(opt.workers >= 1, "workers must be >= 1");
  for (int id : opt.criteria)
    detail::require(id >= 1 && id <= kCriteriaCount, "criteria are numbered 1 to 9");
  return Runner(opt).run();
}

void write_criteria_lines(std::ostream& out, const ValidationReport& r) {
  for (const auto& c : r.criteria)
    out << (c.passed ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.title << ": "
        << c.summary << '\n';
}

void write_validation_text(std::ostream& out, const ValidationReport& r) {
  write_criteria_lines(out, r);
  bool any = false;
  for (const auto& row : r.rows) {
    if (row.passed) continue;
    if (!any) out << "\nfailed checks:\n";
    any = true;
    out << "  criterion " << row.criterion << " " << row.point << ": measured " << fmt(row.measured)
        << ", expected " << fmt(row.expected) << ", tolerance " << fmt(row.tolerance) << '\n';
  }
  out << "\ncensored walks per criterion:\n";
  for (const auto& c : r.criteria) out << "  criterion " << c.id << ": " << c.censored << '\n';
  if (!r.error_curve.empty()) {
    out << "\none-sided error curve (theta = 0, mu = 1):\n  eta rho_hat rho_mc stderr rel_error\n";
    for (const auto& p : r.error_curve)
      out << "  " << fmt(p.eta) << ' ' << fmt(p.rho_hat) << ' ' << fmt(p.rho_mc) << ' '
          << fmt(p.rho_mc_stderr) << ' ' << fmt(p.relative_error) << '\n';
  }
  if (!r.audits.empty()) {
    out << "\nWald-step audit (mu = 1):\n  beta E[exp(-2 beta L)] E[alpha^T] rel_gap walks censored\n";
    for (const auto& a : r.audits)
      out << "  " << fmt(a.beta) << ' ' << fmt(a.discounted_travel) << ' ' << fmt(a.discounted_steps)
          << ' ' << fmt(a.relative_gap) << ' ' << a.walks << ' ' << a.unfinished << '\n';
  }
  out << '\n' << (r.passed() ? "all criteria passed" : "some criteria failed") << '\n';
}

void write_validation_csv(std::ostream& out, const ValidationReport& r) {
  auto quote = [](const std::string& s) { return '"' + s + '"'; };
  out << "section,criterion,point,measured,expected,tolerance,passed,censored\n";
  for (const auto& c : r.criteria)
    out << "criterion," << c.id << ',' << quote(c.title) << ",,,," << (c.passed ? 1 : 0) << ','
        << c.censored << '\n';
  for (const auto& row : r.rows)
    out << "check," << row.criterion << ',' << quote(row.point) << ',' << fmt(row.measured) << ','
        << fmt(row.expected) << ',' << fmt(row.tolerance) << ',' << (row.passed ? 1 : 0) << ','
        << row.censored << '\n';
  for (const auto& p : r.error_curve)
    out << "error_curve,2," << quote("eta=" + fmt(p.eta)) << ',' << fmt(p.rho_mc) << ','
        << fmt(p.rho_hat) << ',' << fmt(p.rho_mc_stderr) << ",," << '\n';
  for (const auto& a : r.audits)
    out << "wald_audit,2," << quote("beta=" + fmt(a.beta)) << ',' << fmt(a.discounted_travel) << ','
        << fmt(a.discounted_steps) << ',' << fmt(a.relative_gap) << ",," << a.unfinished << '\n';
}

}  // namespace renewrt
