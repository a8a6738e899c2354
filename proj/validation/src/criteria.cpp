#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "gasket_plap/driver.hpp"
#include "gasket_plap/energy.hpp"
#include "gasket_plap/errors.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/functional.hpp"
#include "gasket_plap/report.hpp"
#include "gasket_plap/solver.hpp"
#include "gasket_plap/validation.hpp"

namespace gplap::validation {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

template <class Body>
CriterionResult timed(int id, const char* name, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::vector<double> random_dirichlet(const GasketLevel& g, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(g.vertex_count());
  for (double& x : u) x = normal(rng);
  for (VertexId b : GasketLevel::boundary()) u[b] = 0.0;
  return u;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

ProblemSpec canonical(const GasketLevel& g, double lambda) {
  ProblemSpec s;
  s.a = s.b = 1.0;
  s.k = 1.0;
  s.p = 2.0;
  s.q = 1.5;
  s.l = 5.0;
  s.lambda = lambda;
  s.level = g.level();
  s.f_values.assign(g.vertex_count(), 1.0);
  s.g_values.assign(g.vertex_count(), 1.0);
  return s;
}

double terms_scale(const FunctionalTerms& t, const ProblemSpec& s) {
  const double pk1 = s.p * (s.k + 1.0);
  return s.a * std::pow(t.energy, s.k + 1.0) / pk1 + s.b * t.energy / s.p + std::abs(s.lambda * t.F) / s.q +
         std::abs(t.G) / s.l;
}

}  // namespace

CriterionResult rp_recovery() {
  return timed(1, "r_p recovery", [](CriterionResult& r) {
    const double oracle = oracle::rp_level1_p2();
    const auto t0 = Clock::now();
    const double est = estimate_rp(2.0, 1e-9);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    r.pass = std::abs(est - oracle) <= 1e-9 && std::abs(oracle - 0.6) <= 1e-12 && secs < 5.0;
    r.detail = "estimate " + fmt("%.15g", est) + ", oracle " + fmt("%.15g", oracle) + ", " + fmt("%.3f", secs) + " s";
  });
}

CriterionResult harmonic_extension() {
  return timed(2, "harmonic extension rule", [](CriterionResult& r) {
    const GasketLevel g0 = build_level(0);
    const GasketLevel g1 = build_level(1);
    double worst = 0.0;
    auto check = [&](double x1, double x2, double x3) {
      const FractalFunction u(0, {x1, x2, x3}, false);
      const FractalFunction e = extend_pharmonic(u, g0, g1, 2.0);
      const auto o = oracle::harmonic_midpoints_p2(x1, x2, x3);
      for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(e[3 + static_cast<std::size_t>(i)] - o[static_cast<std::size_t>(i)]));
      return e;
    };
    const FractalFunction e = check(1.0, 0.0, 0.0);
    // Closed-form values at (m12, m23, m13) for boundary data (1, 0, 0).
    const double lit = std::max({std::abs(e[3] - 0.4), std::abs(e[4] - 0.2), std::abs(e[5] - 0.4)});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) check(U(rng), U(rng), U(rng));
    r.pass = worst <= 1e-9 && lit <= 1e-9;
    r.detail = "(m12,m23,m13) = (" + fmt("%.12g", e[3]) + ", " + fmt("%.12g", e[4]) + ", " + fmt("%.12g", e[5]) +
               "), max deviation from 3x3 oracle " + fmt("%.2e", worst);
  });
}

CriterionResult energy_calculus() {
  return timed(3, "energy calculus", [](CriterionResult& r) {
    std::mt19937_64 rng(3);
    const int m = 4;
    const GasketLevel g = build_level(m);
    double worst_grad = 0.0;
    double worst_hom = 0.0;
    double worst_const = 0.0;
    bool monotone = true;
    std::string mono_note;
    for (double p : {1.5, 2.0, 3.0}) {
      const double rp = p == 2.0 ? 0.6 : estimate_rp(p, 1e-6);
      const EnergyModel em = EnergyModel::make(p, rp, m);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u = random_dirichlet(g, rng);
        const auto grad = energy_gradient(u, g, em);
        double gmax = 0.0;
        double err = 0.0;
        for (std::size_t v = 3; v < u.size(); ++v) {
          const double h = 1e-6;
          const double keep = u[v];
          u[v] = keep + h;
          const double ep = renormalized_energy(u, g, em);
          u[v] = keep - h;
          const double emn = renormalized_energy(u, g, em);
          u[v] = keep;
          const double fd = (ep - emn) / (2.0 * h);
          err = std::max(err, std::abs(fd - grad[v]));
          gmax = std::max(gmax, std::abs(grad[v]));
        }
        worst_grad = std::max(worst_grad, err / gmax);

        const double e0 = renormalized_energy(u, g, em);
        for (double c : {-2.5, 0.3, 7.0}) {
          std::vector<double> cu(u);
          for (double& x : cu) x *= c;
          worst_hom = std::max(worst_hom, rel(renormalized_energy(cu, g, em), std::pow(std::abs(c), p) * e0));
        }
        for (double c : {0.5, -3.0}) {
          std::vector<double> su(u);
          for (double& x : su) x += c;
          worst_const = std::max(worst_const, rel(renormalized_energy(su, g, em), e0));
        }
      }
      // Restrictions of smooth functions: renormalized energy never drops with m.
      for (int fi = 0; fi < 4; ++fi) {
        double prev = 0.0;
        for (int lvl = 1; lvl <= 6; ++lvl) {
          const GasketLevel gl = build_level(lvl);
          std::vector<double> u(gl.vertex_count());
          for (std::size_t v = 0; v < u.size(); ++v) {
            const double x = gl.points()[v].x;
            const double y = gl.points()[v].y;
            u[v] = fi == 0 ? x * x + y : fi == 1 ? std::sin(3 * x) * std::cos(2 * y) : fi == 2 ? std::exp(x - y) : x * y * y;
          }
          const double e = renormalized_energy(u, gl, EnergyModel::make(p, rp, lvl));
          if (e < prev * (1.0 - 1e-12)) {
            monotone = false;
            mono_note = " (drop at p=" + fmt("%g", p) + ", level " + std::to_string(lvl) + ")";
          }
          prev = e;
        }
      }
    }
    r.pass = worst_grad <= 1e-6 && worst_hom <= 1e-12 && worst_const <= 1e-12 && monotone;
    r.detail = "gradient rel err " + fmt("%.2e", worst_grad) + ", homogeneity " + fmt("%.2e", worst_hom) +
               ", constant shift " + fmt("%.2e", worst_const) + ", monotone in m: " + (monotone ? "yes" : "no") +
               mono_note;
  });
}

CriterionResult embedding_constant() {
  return timed(4, "embedding constant", [](CriterionResult& r) {
    const double closed = 3.0 / std::sqrt(50.0);
    const double golden = oracle::k1_p2();
    std::vector<double> K;
    for (int m = 1; m <= 5; ++m) K.push_back(gplap::embedding_constant(build_level(m), EnergyModel::make(2.0, 0.6, m)));
    bool nondecreasing = true;
    for (std::size_t i = 1; i < K.size(); ++i) nondecreasing = nondecreasing && K[i] >= K[i - 1] * (1.0 - 1e-12);
    r.pass = std::abs(K[0] - closed) <= 1e-8 && std::abs(golden - closed) <= 1e-8 && nondecreasing;
    std::string ks;
    for (double k : K) ks += (ks.empty() ? "" : ", ") + fmt("%.10f", k);
    r.detail = "K_1 = " + fmt("%.12f", K[0]) + " (3/sqrt(50) = " + fmt("%.12f", closed) + "), K_1..5 = " + ks;
  });
}

CriterionResult threshold_algebra() {
  return timed(5, "threshold algebra", [](CriterionResult& r) {
    ProblemSpec s;
    s.p = 2.0;
    s.q = 1.5;
    s.l = 5.0;
    s.k = 1.0;
    s.a = s.b = 1.0;
    s.lambda = 1e-3;
    const Thresholds t = thresholds(s, 1.0, 1.0, 1.0);
    const double d2 = std::abs(t.lambda2 - oracle::kLambda2);
    const double d3 = std::abs(t.lambda3 - oracle::kLambda3);
    const double dh = std::abs(t.lambda_hat1 - oracle::kLambdaHat1);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      ProblemSpec x;
      x.p = 1.1 + 3.0 * U(rng);
      x.q = 1.0 + (x.p - 1.0) * (0.05 + 0.9 * U(rng));
      x.k = 0.05 + 2.0 * U(rng);
      x.l = x.p * (x.k + 1.0) + 0.05 + 4.0 * U(rng);
      x.a = std::pow(10.0, -2.0 + 4.0 * U(rng));
      x.b = std::pow(10.0, -2.0 + 4.0 * U(rng));
      x.lambda = 1.0;
      const Thresholds y =
          thresholds(x, 0.1 + 2.0 * U(rng), std::pow(10.0, -1.0 + 2.0 * U(rng)), std::pow(10.0, -1.0 + 2.0 * U(rng)));
      if (!(y.lambda_hat1 <= y.lambda1)) ++violations;
    }
    r.pass = d2 <= 1e-5 && d3 <= 1e-5 && dh <= 1e-5 && violations == 0;
    r.detail = "lambda2 " + fmt("%.12f", t.lambda2) + " (|diff| " + fmt("%.1e", d2) + "), lambda3 " +
               fmt("%.12f", t.lambda3) + " (|diff| " + fmt("%.1e", d3) + "), lambda_hat1 <= lambda1 violations " +
               std::to_string(violations) + "/1000";
  });
}

CriterionResult fibering_correctness() {
  return timed(6, "fibering correctness", [](CriterionResult& r) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int mismatches = 0;
    int case_count[4] = {0, 0, 0, 0};
    int two_root = 0;
    int no_pair = 0;
    double worst_loc = 0.0;
    for (int i = 0; i < 1000; ++i) {
      FiberingProfile f;
      f.p = 1.4 + 2.3 * U(rng);
      f.q = 1.01 + (f.p - 0.25 - 1.01) * U(rng);
      f.k = 0.1 + 1.5 * U(rng);
      f.l = f.p * (f.k + 1.0) + 0.25 + 3.0 * U(rng);
      f.A = std::pow(10.0, -1.0 + 2.0 * U(rng));
      f.B = std::pow(10.0, -1.0 + 2.0 * U(rng));
      f.lambda = 0.05 + 2.0 * U(rng);
      const int c = i % 4;
      const double fmag = std::pow(10.0, -1.0 + 2.0 * U(rng));
      const double gmag = std::pow(10.0, -1.0 + 2.0 * U(rng));
      f.F = (c == 1 || c == 3) ? fmag : -fmag * (U(rng) < 0.2 ? 0.0 : 1.0);
      f.G = (c == 2 || c == 3) ? gmag : -gmag * (U(rng) < 0.2 ? 0.0 : 1.0);
      const FiberingRoots got = find_roots(f);
      ++case_count[static_cast<int>(got.case_tag)];
      if (static_cast<int>(got.case_tag) != c) ++mismatches;
      const auto want = oracle::dense_grid_roots(f, 1e-10, 1e10);
      if (got.case_tag == FiberingCase::IV) {
        if (want.size() == 2) ++two_root;
        if (want.empty()) ++no_pair;
      }
      if (want.size() != got.roots.size()) {
        ++mismatches;
        continue;
      }
      for (std::size_t j = 0; j < want.size(); ++j) {
        const bool kind_ok = want[j].local_min ? got.roots[j].kind == RootKind::LocalMin
                                               : got.roots[j].kind == RootKind::LocalMax;
        const double loc = rel(got.roots[j].t, want[j].t);
        worst_loc = std::max(worst_loc, loc);
        if (!kind_ok || loc > 1e-8) ++mismatches;
      }
    }

    // Reparametrization and Nehari identities on gasket functions.
    const GasketLevel g = build_level(3);
    const EnergyModel em = EnergyModel::make(2.0, 0.6, 3);
    ProblemSpec spec = canonical(g, 1.0);
    const NehariSolver solver(g, em);
    spec.lambda = 0.5 * solver.thresholds(spec).lambda_hat1;
    double worst_rep = 0.0;
    double worst_id = 0.0;
    int members = 0;
    for (int i = 0; i < 200; ++i) {
      const FractalFunction u = FractalFunction::dirichlet_from(g, random_dirichlet(g, rng));
      const FiberingProfile pu = profile(u, spec, g, em);
      const double c = std::pow(10.0, -1.0 + 2.0 * U(rng));
      const FiberingProfile pcu = profile(u.scaled(c), spec, g, em);
      for (double t : {0.05, 0.7, 1.0, 3.0, 20.0}) {
        const double lhs = phi(t, pcu);
        const double rhs = phi(c * t, pu);
        const FunctionalTerms tt = functional_terms(u.scaled(c * t), spec, g, em);
        worst_rep = std::max(worst_rep, std::abs(lhs - rhs) / terms_scale(tt, spec));
      }
      for (const FiberingRoot& root : find_roots(pu).roots) {
        const FunctionalTerms tm = functional_terms(u.scaled(root.t), spec, g, em);
        const double scale = terms_scale(tm, spec);
        const double i0 = euler_functional(tm, spec);
        const double i2 = euler_on_nehari_without_g(tm, spec);
        const double i3 = euler_on_nehari_without_f(tm, spec);
        const double res = nehari_residual(tm, spec);
        worst_id = std::max({worst_id, std::abs(i0 - i2) / scale, std::abs(i0 - i3) / scale, std::abs(res) / scale});
        ++members;
      }
    }
    r.pass = mismatches == 0 && worst_rep <= 1e-10 && worst_id <= 1e-10 && members > 0;
    r.detail = "1000 profiles (cases I-IV " + std::to_string(case_count[0]) + "/" + std::to_string(case_count[1]) +
               "/" + std::to_string(case_count[2]) + "/" + std::to_string(case_count[3]) + "; case IV two-root " +
               std::to_string(two_root) + ", no pair " + std::to_string(no_pair) + "), mismatches " +
               std::to_string(mismatches) + ", root loc " + fmt("%.1e", worst_loc) + ", reparam " +
               fmt("%.1e", worst_rep) + ", Nehari identities " + fmt("%.1e", worst_id) + " on " +
               std::to_string(members) + " members";
  });
}

CriterionResult two_solution_run() {
  return timed(7, "two-solution run", [](CriterionResult& r) {
    const auto t0 = Clock::now();
    RunConfig cfg;
    cfg.level = 5;
    cfg.solve.restarts = 8;
    const Session s(cfg);
    const SolveOutcome o = run_solve(s);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const SolutionReport& sol = o.solution;
    const double tol_plus = 1e-6 * std::max(1.0, sol.energy_grad_inf_plus);
    const double tol_minus = 1e-6 * std::max(1.0, sol.energy_grad_inf_minus);
    const bool plus = sol.class_plus.tag == NehariTag::Plus && sol.I_plus < 0.0;
    const bool minus = sol.class_minus.tag == NehariTag::Minus && sol.I_minus >= sol.thresholds.delta1 - 1e-8;
    const bool resid = sol.residual_inf_plus <= tol_plus && sol.residual_inf_minus <= tol_minus;
    r.pass = plus && minus && resid && secs < 60.0;
    r.detail = "I+ = " + fmt("%.10g", sol.I_plus) + " (" + to_string(sol.class_plus.tag) + "), I- = " +
               fmt("%.10g", sol.I_minus) + " >= delta1 " + fmt("%.10g", sol.thresholds.delta1) + " (" +
               to_string(sol.class_minus.tag) + "), residuals " + fmt("%.2e", sol.residual_inf_plus) + "/" +
               fmt("%.2e", tol_plus) + ", " + fmt("%.2e", sol.residual_inf_minus) + "/" + fmt("%.2e", tol_minus) +
               ", " + fmt("%.2f", secs) + " s";
  });
}

CriterionResult m0_emptiness() {
  return timed(8, "M0 emptiness probe", [](CriterionResult& r) {
    const GasketLevel g = build_level(4);
    const EnergyModel em = EnergyModel::make(2.0, 0.6, 4);
    const NehariSolver solver(g, em);
    ProblemSpec spec = canonical(g, 1.0);
    const Thresholds thr = solver.thresholds(spec);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto& ext = solver.embedding().extremal;
    auto direction = [&](int i) {
      std::vector<double> w = random_dirichlet(g, rng);
      if (i % 2 == 0) {
        // Smooth-ish directions near the embedding extremal.
        const double sigma = 0.05 * U(rng);
        for (std::size_t v = 0; v < w.size(); ++v) w[v] = ext[v] + sigma * w[v];
      }
      return FractalFunction::dirichlet_from(g, w);
    };

    spec.lambda = 0.9 * thr.lambda1;
    int members = 0;
    int near_zero = 0;
    for (int i = 0; i < 500; ++i) {
      const FractalFunction w = direction(i);
      for (const FiberingRoot& root : find_roots(profile(w, spec, g, em)).roots) {
        const NehariClass c = classify(functional_terms(w.scaled(root.t), spec, g, em), spec);
        ++members;
        if (std::abs(c.phi2) < 1e-9 * c.scale || c.tag == NehariTag::Zero) ++near_zero;
      }
    }

    spec.lambda = 0.9 * thr.lambda_hat1;
    const double delta1 = solver.thresholds(spec).delta1;
    int minus_members = 0;
    int below = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2000 && minus_members < 50; ++i) {
      const FractalFunction w = direction(i);
      double t = 0.0;
      try {
        t = minus_scale(profile(w, spec, g, em));
      } catch (const ProjectionUnavailable&) {
        continue;
      }
      const double I = euler_functional(w.scaled(t), spec, g, em);
      ++minus_members;
      min_gap = std::min(min_gap, I - delta1);
      if (I < delta1 - 1e-8) ++below;
    }
    r.pass = near_zero == 0 && members > 0 && minus_members == 50 && below == 0;
    r.detail = std::to_string(members) + " members at 0.9 lambda_1, " + std::to_string(near_zero) +
               " with |phi''| < 1e-9 scale; " + std::to_string(minus_members) + " minus members at 0.9 lambda_hat_1, " +
               std::to_string(below) + " below delta1 (min I - delta1 = " + fmt("%.4g", min_gap) + ")";
  });
}

CriterionResult continuity_diagnostic() {
  return timed(9, "continuity diagnostic", [](CriterionResult& r) {
    const GasketLevel g = build_level(4);
    const EnergyModel em = EnergyModel::make(2.0, 0.6, 4);
    const NehariSolver solver(g, em);
    ProblemSpec spec = canonical(g, 1.0);
    spec.lambda = 0.5 * solver.thresholds(spec).lambda_hat1;
    SolveOptions opts;
    opts.restarts = 2;
    const SolutionReport sol = solver.two_solutions(spec, opts);
    std::mt19937_64 rng(9);
    const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    int failures = 0;
    double eps0_min = 1.0;
    double c_max = 0.0;
    double worst_zero = 0.0;
    int full_monotone = 0;
    for (Branch br : {Branch::Plus, Branch::Minus}) {
      const FractalFunction& u0 = br == Branch::Plus ? sol.u_plus : sol.u_minus;
      const double u0_norm = std::pow(renormalized_energy(u0.values(), g, em), 0.5);
      for (int d = 0; d < 10; ++d) {
        std::vector<double> w = random_dirichlet(g, rng);
        const double wn = std::pow(renormalized_energy(w, g, em), 0.5);
        for (double& x : w) x *= u0_norm / wn;
        const FractalFunction wf = FractalFunction::dirichlet_from(g, w);
        const double zero[] = {0.0};
        worst_zero = std::max(worst_zero,
                              std::abs(perturbation_continuity_check(u0, wf, zero, spec, g, em, br)[0].t_bar - 1.0));
        for (double sign : {1.0, -1.0}) {
          std::vector<double> eps(ladder);
          for (double& e : eps) e *= sign;
          const auto rows = perturbation_continuity_check(u0, wf, eps, spec, g, em, br);
          std::vector<double> dev;
          bool available = true;
          for (const auto& row : rows) {
            available = available && row.available;
            dev.push_back(std::abs(row.t_bar - 1.0));
          }
          if (!available) {
            ++failures;
            continue;
          }
          // Linear envelope dev = C eps fitted in log space on the three smallest eps.
          double log_c = 0.0;
          for (std::size_t i = 3; i < dev.size(); ++i) log_c += std::log(std::max(dev[i], 1e-300) / ladder[i]);
          const double C = std::exp(log_c / 3.0);
          c_max = std::max(c_max, C);
          bool whole = true;
          for (std::size_t i = 1; i < dev.size(); ++i) whole = whole && dev[i] < dev[i - 1];
          full_monotone += whole ? 1 : 0;
          // eps0: largest rung below which the table decreases and stays in the envelope.
          double eps0 = 0.0;
          for (std::size_t i = dev.size(); i-- > 0;) {
            const bool in_envelope = dev[i] <= 1.5 * C * ladder[i] + 1e-13;
            const bool below_next = i + 1 == dev.size() || dev[i + 1] < dev[i];
            if (!in_envelope || !below_next) break;
            eps0 = ladder[i];
          }
          eps0_min = std::min(eps0_min, eps0);
          if (eps0 < ladder[3]) ++failures;
        }
      }
    }
    r.pass = failures == 0 && worst_zero <= 1e-10;
    r.detail = "40 ladders (plus/minus x 10 directions x +-eps): " + std::to_string(failures) +
               " failures, |t(0) - 1| <= " + fmt("%.1e", worst_zero) + ", envelope C <= " + fmt("%.3g", c_max) +
               ", monotone and enveloped below eps0 >= " + fmt("%.0e", eps0_min) + " (" +
               std::to_string(full_monotone) + "/40 monotone over the whole ladder)";
  });
}

CriterionResult determinism() {
  return timed(10, "determinism", [](CriterionResult& r) {
    RunConfig cfg;
    cfg.level = 5;
    std::string first;
    std::string first_csv;
    bool same = true;
    for (int run = 0; run < 3; ++run) {
      const Session s(cfg);
      SolveOutcome o = run_solve(s);
      o.report.timestamp.clear();
      const std::string json = report_to_json(o.report);
      std::ostringstream csv;
      write_solution_csv(s.gasket(), o.solution.u_plus, o.solution.u_minus, csv);
      if (run == 0) {
        first = json;
        first_csv = csv.str();
      } else {
        same = same && json == first && csv.str() == first_csv;
      }
    }
    r.pass = same;
    r.detail = std::string("3 canonical runs, seed 1: report.json and solution.csv ") +
               (same ? "byte-identical" : "DIFFER") + " (" + std::to_string(first.size()) + " bytes of JSON)";
  });
}

std::vector<CriterionResult> run_all() {
  return {rp_recovery(),          harmonic_extension(), energy_calculus(), embedding_constant(),
          threshold_algebra(),    fibering_correctness(), two_solution_run(), m0_emptiness(),
          continuity_diagnostic(), determinism()};
}

void print_table(const std::vector<CriterionResult>& results, std::ostream& os) {
  char buf[128];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "[%s] %2d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    os << buf << r.detail << '\n';
  }
}

}  // namespace gplap::validation
