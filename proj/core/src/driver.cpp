#include "gasket_plap/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>

#include "gasket_plap/errors.hpp"
#include "gasket_plap/rp_cache.hpp"
#include "json_format.hpp"

namespace gplap {

Session::Session(const RunConfig& cfg) : cfg_(cfg) {
  gasket_ = std::make_unique<GasketLevel>(build_level(cfg.level));
  double r_p = 0.6;
  double tol = 0.0;
  if (cfg.p != 2.0) {
    RpCache cache(RpCache::resolve_path());
    const RpCache::Entry e = cache.get_or_estimate(cfg.p, cfg.rp_tol);
    r_p = e.r_p;
    tol = e.tol;
  }
  em_ = EnergyModel::make(cfg.p, r_p, cfg.level, tol);
  solver_ = std::make_unique<NehariSolver>(*gasket_, em_);
  spec_ = cfg.problem(*gasket_, cfg.lambda.value_or(1.0));
  thresholds_ = solver_->thresholds(spec_);
  if (!cfg.lambda) {
    spec_.lambda = cfg.lambda_frac * thresholds_.lambda_hat1;
    thresholds_ = solver_->thresholds(spec_);
  }
}

SolveOutcome run_solve(const Session& s) {
  SolveOutcome o;
  o.solution = s.solver().two_solutions(s.spec(), s.config().solve);
  o.report = make_run_report(s.spec(), s.config().f.to_string(), s.config().g.to_string(), o.solution, s.model(),
                             s.config().solve.seed);
  return o;
}

std::vector<double> sweep_grid(const Session& s) {
  const RunConfig& c = s.config();
  if (!c.sweep_lambdas.empty()) return c.sweep_lambdas;
  std::vector<double> grid;
  grid.reserve(c.sweep_fracs.size());
  for (double f : c.sweep_fracs) grid.push_back(f * s.thresholds().lambda_hat1);
  return grid;
}

std::vector<SweepRow> run_sweep(const Session& s, std::span<const double> lambdas) {
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    SweepRow row;
    row.lambda = lambda;
    const ProblemSpec spec = s.spec().with_lambda(lambda);
    const Thresholds thr = s.solver().thresholds(spec);
    row.lambda_hat1 = thr.lambda_hat1;
    row.lambda_frac = lambda / thr.lambda_hat1;
    row.delta1 = thr.delta1;
    const bool below = lambda < thr.lambda_hat1;
    SolveOptions opts = s.config().solve;
    opts.check_threshold = below;
    std::string status;
    auto note = [&](const std::string& m) { status += (status.empty() ? "" : "; ") + m; };
    if (!below) note("lambda >= lambda_hat_1: two-solution guarantee does not apply");
    try {
      const SolutionReport sol = s.solver().two_solutions(spec, opts);
      row.plus_ok = sol.plus_ok;
      row.minus_ok = sol.minus_ok;
      row.I_plus = sol.I_plus;
      row.I_minus = sol.I_minus;
      row.residual_inf_plus = std::isfinite(sol.I_plus) ? sol.residual_inf_plus : std::nan("");
      row.residual_inf_minus = std::isfinite(sol.I_minus) ? sol.residual_inf_minus : std::nan("");
      row.delta1_certified = sol.delta1_certified;
      if (!sol.failure.empty()) note(sol.failure);
      if (sol.minus_ok && !sol.delta1_certified) note("delta1 certificate failed");
    } catch (const Error& e) {
      row.I_plus = row.I_minus = std::nan("");
      row.residual_inf_plus = row.residual_inf_minus = std::nan("");
      note(e.what());
    }
    if (status.empty() && row.plus_ok && row.minus_ok && row.delta1_certified) status = "ok";
    if (status.empty()) status = "uncertified";
    row.status = status;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& os) {
  os << "lambda,lambda_frac,lambda_hat1,delta1,plus_ok,minus_ok,I_plus,I_minus,residual_inf_plus,"
        "residual_inf_minus,delta1_certified,status\n";
  char buf[512];
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    for (char& ch : status) {
      if (ch == '"') ch = '\'';
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%d,", r.lambda,
                  r.lambda_frac, r.lambda_hat1, r.delta1, r.plus_ok ? 1 : 0, r.minus_ok ? 1 : 0, r.I_plus,
                  r.I_minus, r.residual_inf_plus, r.residual_inf_minus, r.delta1_certified ? 1 : 0);
    os << buf << '"' << status << "\"\n";
  }
}

std::vector<double> log_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !(t_max > t_min) || n < 2) throw PreconditionError("log_grid requires 0 < t_min < t_max, n >= 2");
  std::vector<double> t(static_cast<std::size_t>(n));
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

FiberingDump run_fibering(const Session& s) {
  const EmbeddingResult& emb = s.solver().embedding();
  const double e = renormalized_energy(emb.extremal.values(), s.gasket(), s.model());
  const FractalFunction w = emb.extremal.scaled(std::pow(e, -1.0 / s.model().p));
  FiberingDump d;
  d.profile = profile(w, s.spec(), s.gasket(), s.model());
  d.roots = find_roots(d.profile);
  std::ostringstream csv;
  const auto grid = log_grid(s.config().t_min, s.config().t_max, s.config().t_points);
  write_fibering_csv(d.profile, grid, csv);
  std::error_code ec;
  const std::filesystem::path dir = s.config().out_dir;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_text_file(dir / "fibering.csv", csv.str());
  return d;
}

std::string thresholds_json(const Session& s) {
  const Thresholds& t = s.thresholds();
  auto num = [](double x) {
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j = {{"lambda", num(s.spec().lambda)}, {"lambda2", num(t.lambda2)},
                              {"lambda3", num(t.lambda3)},      {"lambda1", num(t.lambda1)},
                              {"lambda_hat1", num(t.lambda_hat1)}, {"delta1", num(t.delta1)},
                              {"K", num(t.K_used)},             {"f_norm", num(t.f_norm)},
                              {"g_norm", num(t.g_norm)}};
  return dump_json(j) + "\n";
}

void print_solve_summary(const SolveOutcome& o, std::ostream& os) {
  const SolutionReport& s = o.solution;
  char buf[256];
  std::snprintf(buf, sizeof buf, "lambda        %.10g  (lambda_hat_1 %.10g, delta1 %.10g)\n", o.report.spec.lambda,
                s.thresholds.lambda_hat1, s.thresholds.delta1);
  os << buf;
  std::snprintf(buf, sizeof buf, "plus  branch  I = %.12g  residual %.3g  class %s%s%s\n", s.I_plus,
                s.residual_inf_plus, to_string(s.class_plus.tag), s.converged_plus ? "" : "  NOT converged",
                s.multimodal_plus ? "  [restarts disagree]" : "");
  os << buf;
  std::snprintf(buf, sizeof buf, "minus branch  I = %.12g  residual %.3g  class %s%s%s\n", s.I_minus,
                s.residual_inf_minus, to_string(s.class_minus.tag), s.converged_minus ? "" : "  NOT converged",
                s.multimodal_minus ? "  [restarts disagree]" : "");
  os << buf;
  std::snprintf(buf, sizeof buf, "delta1 certificate %s, %d iterations\n", s.delta1_certified ? "holds" : "FAILS",
                s.iterations);
  os << buf;
  if (!s.failure.empty()) os << "failure: " << s.failure << '\n';
}

void print_thresholds(const Session& s, std::ostream& os) {
  const Thresholds& t = s.thresholds();
  char buf[128];
  const std::pair<const char*, double> rows[] = {
      {"K", t.K_used},           {"f_norm", t.f_norm}, {"g_norm", t.g_norm},
      {"lambda2", t.lambda2},    {"lambda3", t.lambda3}, {"lambda1", t.lambda1},
      {"lambda_hat1", t.lambda_hat1}, {"lambda", s.spec().lambda}, {"delta1", t.delta1}};
  for (const auto& [name, v] : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %.17g\n", name, v);
    os << buf;
  }
}

}  // namespace gplap
