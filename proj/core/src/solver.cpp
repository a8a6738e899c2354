#include "gasket_plap/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <random>

#include "gasket_plap/errors.hpp"

namespace gplap {

void SolveOptions::check() const {
  if (restarts < 1) throw InvariantError("solve options require restarts >= 1");
  if (max_iters < 1) throw InvariantError("solve options require max_iters >= 1");
  if (!(step0 > 0.0)) throw InvariantError("solve options require step0 > 0");
  if (!(grad_tol > 0.0)) throw InvariantError("solve options require grad_tol > 0");
}

const char* to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

std::vector<double> euler_gradient(std::span<const double> u, const ProblemSpec& spec, const GasketLevel& g,
                                   const EnergyModel& em) {
  std::vector<double> grad = energy_gradient(u, g, em);
  const double energy = renormalized_energy(u, g, em);
  const double coeff = kirchhoff(energy, spec) / spec.p;
  const auto w = g.weights();
  for (std::size_t v = 0; v < grad.size(); ++v) {
    if (GasketLevel::is_boundary(static_cast<VertexId>(v))) {
      grad[v] = 0.0;
      continue;
    }
    double source = 0.0;
    if (u[v] != 0.0) {
      const double au = std::abs(u[v]);
      const double s = u[v] > 0 ? 1.0 : -1.0;
      source = spec.lambda * spec.f_values[v] * s * std::pow(au, spec.q - 1.0) +
               spec.g_values[v] * s * std::pow(au, spec.l - 1.0);
    }
    grad[v] = coeff * grad[v] - w[v] * source;
  }
  return grad;
}

double gradient_term_scale(std::span<const double> u, const ProblemSpec& spec, const GasketLevel& g,
                           const EnergyModel& em) {
  const std::vector<double> ge = energy_gradient(u, g, em);
  const double coeff = kirchhoff(renormalized_energy(u, g, em), spec) / spec.p;
  const auto w = g.weights();
  double scale = 0.0;
  for (std::size_t v = 3; v < ge.size(); ++v) {
    const double au = std::abs(u[v]);
    const double source = au == 0.0 ? 0.0
                                    : std::abs(spec.lambda * spec.f_values[v]) * std::pow(au, spec.q - 1.0) +
                                          std::abs(spec.g_values[v]) * std::pow(au, spec.l - 1.0);
    scale = std::max(scale, coeff * std::abs(ge[v]) + w[v] * source);
  }
  return scale;
}

WeakResidual weak_residual(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                           const EnergyModel& em) {
  require_same_level(u, g);
  if (!u.dirichlet()) throw PreconditionError("weak_residual requires a Dirichlet function");
  WeakResidual r;
  r.trivial = u.is_zero();
  r.residual = euler_gradient(u.values(), spec, g, em);
  for (double x : r.residual) r.inf_norm = std::max(r.inf_norm, std::abs(x));
  const auto ge = energy_gradient(u.values(), g, em);
  for (double x : ge) r.energy_grad_inf = std::max(r.energy_grad_inf, std::abs(x));
  return r;
}

struct NehariSolver::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> metric;
  double metric_scale = 1.0;

  struct Eval {
    bool ok = false;
    double J = 0.0;
    double t = 0.0;
    std::vector<double> grad;
    std::vector<double> pgrad;
    double gnorm = 0.0;
    double J_scale = 0.0;    ///< sum of |terms| of I at the projected point
    double res_inf = 0.0;    ///< ||grad I(u)||_inf
    double res_scale = 0.0;  ///< max over vertices of the summed |terms| of grad I(u)
    std::string note;
  };

  // z = P^{-1} x on interior vertices; boundary entries stay zero.
  std::vector<double> apply_inverse(const std::vector<double>& x) const {
    const Eigen::Index n = static_cast<Eigen::Index>(x.size()) - 3;
    Eigen::Map<const Eigen::VectorXd> xi(x.data() + 3, n);
    Eigen::VectorXd zi = metric.solve(xi);
    std::vector<double> z(x.size(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) z[static_cast<std::size_t>(i) + 3] = zi[i];
    return z;
  }

  double metric_dot(const GasketLevel& g, const std::vector<double>& a, const std::vector<double>& b) const {
    // a^T P b with P = metric_scale * (Dirichlet graph Laplacian).
    double s = 0.0;
    for (const Edge& e : g.edges()) s += (a[e.a] - a[e.b]) * (b[e.a] - b[e.b]);
    return metric_scale * s;
  }
};

NehariSolver::NehariSolver(const GasketLevel& g, const EnergyModel& em)
    : g_(&g), em_(em), impl_(std::make_unique<Impl>()) {
  em_.check();
  if (g.level() != em.level) throw DimensionError("solver: gasket and energy model levels differ");
  if (g.level() < 1) throw PreconditionError("solver requires level >= 1 (level 0 has no interior vertices)");
  emb_ = embedding_extremal(g, em_);

  const auto n = static_cast<Eigen::Index>(g.vertex_count() - 3);
  impl_->metric_scale = 2.0 * std::pow(em_.r_p, -static_cast<double>(g.level()));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * g.edges().size());
  for (const Edge& e : g.edges()) {
    const bool ia = !GasketLevel::is_boundary(e.a);
    const bool ib = !GasketLevel::is_boundary(e.b);
    const Eigen::Index a = static_cast<Eigen::Index>(e.a) - 3;
    const Eigen::Index b = static_cast<Eigen::Index>(e.b) - 3;
    const double s = impl_->metric_scale;
    if (ia) trip.emplace_back(a, a, s);
    if (ib) trip.emplace_back(b, b, s);
    if (ia && ib) {
      trip.emplace_back(a, b, -s);
      trip.emplace_back(b, a, -s);
    }
  }
  Eigen::SparseMatrix<double> P(n, n);
  P.setFromTriplets(trip.begin(), trip.end());
  impl_->metric.compute(P);
  if (impl_->metric.info() != Eigen::Success) throw ConvergenceError("failed to factorize the descent metric", 0.0);
}

NehariSolver::~NehariSolver() = default;
NehariSolver::NehariSolver(NehariSolver&&) noexcept = default;
NehariSolver& NehariSolver::operator=(NehariSolver&&) noexcept = default;

Thresholds NehariSolver::thresholds(const ProblemSpec& spec) const {
  return gplap::thresholds(spec, emb_.K, l1_norm(*g_, spec.f_values), l1_norm(*g_, spec.g_values));
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr std::size_t kNonmonotoneWindow = 8;

void normalize(std::vector<double>& w, const GasketLevel& g, const EnergyModel& em) {
  const double e = renormalized_energy(w, g, em);
  if (!(e > 0.0)) throw DegenerateInputError("cannot normalize a direction with zero energy");
  const double s = std::pow(e, -1.0 / em.p);
  for (double& x : w) x *= s;
}

}  // namespace

BranchResult NehariSolver::minimize(Branch branch, const ProblemSpec& spec, const SolveOptions& opts,
                                    std::span<const FractalFunction> extra_starts) const {
  opts.check();
  spec.validate(*g_);
  const GasketLevel& g = *g_;
  const EnergyModel& em = em_;

  if (opts.check_threshold) {
    const Thresholds thr = thresholds(spec);
    char buf[200];
    if (branch == Branch::Plus && !(spec.lambda < thr.lambda1)) {
      std::snprintf(buf, sizeof buf, "plus-branch minimization requires lambda < lambda_1 = %.17g (got %.17g)",
                    thr.lambda1, spec.lambda);
      throw PreconditionError(buf);
    }
    if (branch == Branch::Minus && !(spec.lambda < thr.lambda_hat1)) {
      std::snprintf(buf, sizeof buf, "minus-branch minimization requires lambda < lambda_hat_1 = %.17g (got %.17g)",
                    thr.lambda_hat1, spec.lambda);
      throw PreconditionError(buf);
    }
  }

  const Impl& impl = *impl_;
  auto evaluate = [&](const std::vector<double>& w) {
    Impl::Eval ev;
    const FunctionalTerms terms = functional_terms(w, spec, g, em);
    const FiberingProfile prof = make_profile(terms, spec);
    try {
      ev.t = branch == Branch::Plus ? plus_scale(prof) : minus_scale(prof);
    } catch (const ProjectionUnavailable& e) {
      ev.note = e.what();
      return ev;
    }
    ev.ok = true;
    ev.J = phi(ev.t, prof);
    ev.J_scale = std::abs(ev.J) + ev.t * phi_prime_scale(ev.t, prof);
    std::vector<double> u(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) u[i] = ev.t * w[i];
    ev.grad = euler_gradient(u, spec, g, em);
    ev.res_scale = gradient_term_scale(u, spec, g, em);
    for (double x : ev.grad) ev.res_inf = std::max(ev.res_inf, std::abs(x));
    for (double& x : ev.grad) x *= ev.t;
    ev.pgrad = impl.apply_inverse(ev.grad);
    double gg = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) gg += ev.grad[i] * ev.pgrad[i];
    ev.gnorm = std::sqrt(std::max(gg, 0.0));
    return ev;
  };

  struct Run {
    RestartOutcome outcome;
    std::vector<double> w;
    double t = 1.0;
  };

  auto run = [&](std::vector<double> w) {
    Run r;
    for (VertexId b : GasketLevel::boundary()) w[b] = 0.0;
    try {
      normalize(w, g, em);
    } catch (const DegenerateInputError& e) {
      r.outcome.note = e.what();
      return r;
    }
    Impl::Eval ev = evaluate(w);
    if (!ev.ok) {
      r.outcome.note = ev.note;
      return r;
    }
    r.outcome.admissible = true;
    double alpha = opts.step0;
    std::vector<double> history{ev.J};
    int it = 0;
    for (; it < opts.max_iters; ++it) {
      if (ev.res_inf <= opts.grad_tol * ev.res_scale) {
        r.outcome.converged = true;
        break;
      }
      const double slope = -ev.gnorm * ev.gnorm;
      const double reference = *std::max_element(history.begin(), history.end());
      // Rounding band of J; inside it only the gradient is informative.
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() * ev.J_scale;
      bool accepted = false;
      std::vector<double> wt(w.size());
      Impl::Eval et;
      double a = alpha;
      for (int h = 0; h < kMaxHalvings; ++h, a *= 0.5) {
        for (std::size_t i = 0; i < w.size(); ++i) wt[i] = w[i] - a * ev.pgrad[i];
        try {
          normalize(wt, g, em);
        } catch (const DegenerateInputError&) {
          continue;
        }
        et = evaluate(wt);
        if (!et.ok) continue;
        const bool armijo = et.J <= reference + kArmijo * a * slope;
        const bool flat = et.J <= ev.J + noise && et.gnorm < ev.gnorm;
        if (armijo || flat) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        r.outcome.note = "line search stalled";
        break;
      }
      // Barzilai-Borwein step in the metric, kept within four decades of
      // the accepted step.
      std::vector<double> s(w.size());
      double sy = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        s[i] = wt[i] - w[i];
        sy += s[i] * (et.grad[i] - ev.grad[i]);
      }
      const double bb = impl.metric_dot(g, s, s) / sy;
      alpha = (sy > 0.0 && std::isfinite(bb)) ? std::clamp(bb, 1e-4 * a, 1e4 * a) : 2.0 * a;
      w.swap(wt);
      ev = std::move(et);
      history.push_back(ev.J);
      if (history.size() > kNonmonotoneWindow) history.erase(history.begin());
    }
    r.outcome.iterations = it;
    r.outcome.value = ev.J;
    r.outcome.grad_norm = ev.gnorm;
    r.w = std::move(w);
    r.t = ev.t;
    return r;
  };

  // Starting directions: caller-supplied, the embedding extremal, then
  // i.i.d. standard normal vectors.
  std::vector<std::vector<double>> starts;
  for (const auto& s : extra_starts) {
    require_same_level(s, g);
    starts.emplace_back(s.values().begin(), s.values().end());
  }
  starts.emplace_back(emb_.extremal.values().begin(), emb_.extremal.values().end());
  for (int r = 1; r < opts.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(branch == Branch::Plus ? 1 : 2)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> w(g.vertex_count());
    for (double& x : w) x = normal(rng);
    starts.push_back(std::move(w));
  }

  std::vector<std::future<Run>> futures;
  futures.reserve(starts.size());
  for (auto& s : starts) futures.push_back(std::async(std::launch::async, run, std::move(s)));
  std::vector<Run> runs;
  runs.reserve(futures.size());
  for (auto& f : futures) runs.push_back(f.get());

  BranchResult res;
  double best = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RestartOutcome& o = runs[i].outcome;
    res.restarts.push_back(o);
    res.iterations += o.iterations;
    if (!o.admissible) continue;
    ++res.restarts_used;
    if (o.converged) {
      lo = std::min(lo, o.value);
      hi = std::max(hi, o.value);
    }
    if (o.value < best) {
      best = o.value;
      res.best_restart = static_cast<int>(i);
    }
  }
  if (res.best_restart < 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s branch: no admissible direction after %zu restarts (needs %s > 0 along the direction)",
                  to_string(branch), runs.size(), branch == Branch::Plus ? "lambda * F" : "G");
    throw InfeasibleError(buf);
  }
  const Run& win = runs[static_cast<std::size_t>(res.best_restart)];
  res.multimodal = std::isfinite(lo) && (hi - lo) > 1e-6 * std::abs(lo);
  res.I = win.outcome.value;
  res.t_star = win.t;
  res.converged = win.outcome.converged;
  std::vector<double> u(win.w.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = win.t * win.w[i];
  res.u = FractalFunction(g.level(), std::move(u), true);
  res.certificate = classify(res.u, spec, g, em);
  return res;
}

namespace {

std::string not_converged(Branch br, const BranchResult& r) {
  const RestartOutcome& o = r.restarts[static_cast<std::size_t>(r.best_restart)];
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s branch: best restart stopped after %d iterations above the residual tolerance (%s)",
                to_string(br), o.iterations, o.note.empty() ? "iteration limit" : o.note.c_str());
  return buf;
}

}  // namespace

SolutionReport NehariSolver::two_solutions(const ProblemSpec& spec, const SolveOptions& opts) const {
  spec.validate(*g_);
  SolutionReport rep;
  rep.thresholds = thresholds(spec);
  if (opts.check_threshold && !(spec.lambda < rep.thresholds.lambda_hat1)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "two-solution run requires lambda < lambda_hat_1 = %.17g (got %.17g)",
                  rep.thresholds.lambda_hat1, spec.lambda);
    throw PreconditionError(buf);
  }

  std::vector<FractalFunction> warm_plus;
  std::vector<FractalFunction> warm_minus;
  if (opts.warm_start_levels && g_->level() >= 2) {
    const GasketLevel coarse = build_level(g_->level() - 1, g_->corners());
    EnergyModel cem = em_;
    cem.level = coarse.level();
    ProblemSpec cspec = spec;
    cspec.level = coarse.level();
    cspec.f_values.resize(coarse.vertex_count());
    cspec.g_values.resize(coarse.vertex_count());
    SolveOptions copts = opts;
    copts.warm_start_levels = false;
    copts.check_threshold = false;
    const NehariSolver coarse_solver(coarse, cem);
    for (Branch br : {Branch::Plus, Branch::Minus}) {
      try {
        const BranchResult cr = coarse_solver.minimize(br, cspec, copts);
        auto& dst = br == Branch::Plus ? warm_plus : warm_minus;
        dst.push_back(extend_pharmonic(cr.u, coarse, *g_, em_.p));
      } catch (const Error&) {
        // A coarse failure only costs the extra starting direction.
      }
    }
  }

  std::string failures;
  auto solve_branch = [&](Branch br, const std::vector<FractalFunction>& extra) -> std::optional<BranchResult> {
    try {
      return minimize(br, spec, opts, extra);
    } catch (const InfeasibleError& e) {
      failures += std::string(failures.empty() ? "" : "; ") + e.what();
    } catch (const ConvergenceError& e) {
      failures += std::string(failures.empty() ? "" : "; ") + to_string(br) + " branch: " + e.what();
    }
    return std::nullopt;
  };

  const auto plus = solve_branch(Branch::Plus, warm_plus);
  const auto minus = solve_branch(Branch::Minus, warm_minus);
  if (plus) {
    rep.u_plus = plus->u;
    rep.I_plus = plus->I;
    rep.class_plus = plus->certificate;
    rep.multimodal_plus = plus->multimodal;
    rep.iterations += plus->iterations;
    rep.restarts_used += plus->restarts_used;
    const WeakResidual wr = weak_residual(plus->u, spec, *g_, em_);
    rep.residual_inf_plus = wr.inf_norm;
    rep.energy_grad_inf_plus = wr.energy_grad_inf;
    rep.converged_plus = plus->converged;
    rep.plus_ok = plus->certificate.tag == NehariTag::Plus && plus->converged;
    if (plus->certificate.tag != NehariTag::Plus) {
      failures += std::string(failures.empty() ? "" : "; ") + "plus solution failed classification";
    }
    if (!plus->converged) failures += std::string(failures.empty() ? "" : "; ") + not_converged(Branch::Plus, *plus);
  } else {
    rep.u_plus = FractalFunction::zeros(*g_, true);
    rep.I_plus = std::numeric_limits<double>::quiet_NaN();
  }
  if (minus) {
    rep.u_minus = minus->u;
    rep.I_minus = minus->I;
    rep.class_minus = minus->certificate;
    rep.multimodal_minus = minus->multimodal;
    rep.iterations += minus->iterations;
    rep.restarts_used += minus->restarts_used;
    const WeakResidual wr = weak_residual(minus->u, spec, *g_, em_);
    rep.residual_inf_minus = wr.inf_norm;
    rep.energy_grad_inf_minus = wr.energy_grad_inf;
    rep.converged_minus = minus->converged;
    rep.minus_ok = minus->certificate.tag == NehariTag::Minus && minus->converged;
    if (minus->certificate.tag != NehariTag::Minus) {
      failures += std::string(failures.empty() ? "" : "; ") + "minus solution failed classification";
    }
    if (!minus->converged) failures += std::string(failures.empty() ? "" : "; ") + not_converged(Branch::Minus, *minus);
    rep.delta1_certified = std::isfinite(rep.thresholds.delta1) && rep.I_minus >= rep.thresholds.delta1 - 1e-8;
  } else {
    rep.u_minus = FractalFunction::zeros(*g_, true);
    rep.I_minus = std::numeric_limits<double>::quiet_NaN();
  }
  rep.failure = failures;
  return rep;
}

std::pair<FractalFunction, double> minimize_on_plus(const ProblemSpec& spec, const GasketLevel& g,
                                                    const EnergyModel& em, const SolveOptions& opts) {
  const NehariSolver solver(g, em);
  BranchResult r = solver.minimize(Branch::Plus, spec, opts);
  return {std::move(r.u), r.I};
}

std::pair<FractalFunction, double> minimize_on_minus(const ProblemSpec& spec, const GasketLevel& g,
                                                     const EnergyModel& em, const SolveOptions& opts) {
  const NehariSolver solver(g, em);
  BranchResult r = solver.minimize(Branch::Minus, spec, opts);
  return {std::move(r.u), r.I};
}

SolutionReport two_solutions(const ProblemSpec& spec, const GasketLevel& g, const EnergyModel& em,
                             const SolveOptions& opts) {
  return NehariSolver(g, em).two_solutions(spec, opts);
}

std::vector<ContinuityRow> perturbation_continuity_check(const FractalFunction& u0, const FractalFunction& w,
                                                         std::span<const double> eps_ladder,
                                                         const ProblemSpec& spec, const GasketLevel& g,
                                                         const EnergyModel& em, Branch branch) {
  require_same_level(u0, g);
  require_same_level(w, g);
  if (!u0.dirichlet() || !w.dirichlet()) throw PreconditionError("continuity check requires Dirichlet functions");
  std::vector<ContinuityRow> rows;
  rows.reserve(eps_ladder.size());
  std::vector<double> v(u0.size());
  for (double eps : eps_ladder) {
    ContinuityRow row;
    row.eps = eps;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u0[i] + eps * w[i];
    try {
      const FiberingProfile prof = make_profile(functional_terms(v, spec, g, em), spec);
      row.t_bar = branch == Branch::Plus ? plus_scale(prof) : minus_scale(prof);
    } catch (const ProjectionUnavailable&) {
      row.available = false;
      row.t_bar = std::numeric_limits<double>::quiet_NaN();
    } catch (const DegenerateInputError&) {
      row.available = false;
      row.t_bar = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gplap
