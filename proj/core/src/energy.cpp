#include "gasket_plap/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gasket_plap/errors.hpp"

namespace gplap {

EnergyModel EnergyModel::make(double p, double r_p, int level, double rp_tolerance) {
  EnergyModel em{p, r_p, level, rp_tolerance};
  em.check();
  return em;
}

void EnergyModel::check() const {
  if (!(p > 1.0)) throw InvariantError("energy model requires p > 1");
  if (!(r_p > 0.0 && r_p < 1.0)) throw InvariantError("energy model requires 0 < r_p < 1");
  if (level < 0) throw InvariantError("energy model requires a nonnegative level");
}

double a_p(double x1, double x2, double x3, double p) {
  return std::pow(std::abs(x1 - x2), p) + std::pow(std::abs(x2 - x3), p) + std::pow(std::abs(x3 - x1), p);
}

double crude_energy(std::span<const double> u, const GasketLevel& g, double p) {
  if (u.size() != g.vertex_count()) throw DimensionError("crude_energy: length mismatch");
  return edge_energy(g.edges(), u, p);
}

double crude_energy(const FractalFunction& u, const GasketLevel& g, double p) {
  require_same_level(u, g);
  return crude_energy(u.values(), g, p);
}

namespace {

double renormalization(const EnergyModel& em, int level) { return std::pow(em.r_p, -static_cast<double>(level)); }

void require_model_level(const GasketLevel& g, const EnergyModel& em) {
  if (g.level() != em.level) {
    throw DimensionError("level mismatch: energy model at level " + std::to_string(em.level) + ", gasket at level " +
                         std::to_string(g.level()));
  }
}

}  // namespace

double renormalized_energy(std::span<const double> u, const GasketLevel& g, const EnergyModel& em) {
  require_model_level(g, em);
  return crude_energy(u, g, em.p) * renormalization(em, g.level());
}

EnergyReport renormalized_energy(const FractalFunction& u, const GasketLevel& g, const EnergyModel& em) {
  require_same_level(u, g);
  require_model_level(g, em);
  EnergyReport r;
  r.crude = crude_energy(u.values(), g, em.p);
  r.renormalized = r.crude * renormalization(em, g.level());
  r.norm = std::pow(r.renormalized, 1.0 / em.p);
  return r;
}

std::array<double, 3> extend_cell(const std::array<double, 3>& x, double p, const ConvexSolveOptions& opts) {
  const double lo = std::min({x[0], x[1], x[2]});
  const double hi = std::max({x[0], x[1], x[2]});
  const double span = hi - lo;
  if (span == 0.0) return {lo, lo, lo};

  // Local ids: 0..2 corners, 3 = m12, 4 = m23, 5 = m13.
  static constexpr Edge kEdges[] = {{0, 3}, {3, 5}, {5, 0}, {3, 1}, {1, 4}, {4, 3}, {5, 4}, {4, 2}, {2, 5}};
  static constexpr std::uint8_t kFixed[] = {1, 1, 1, 0, 0, 0};
  std::vector<double> v(6);
  for (int i = 0; i < 3; ++i) v[i] = (x[i] - lo) / span;
  v[3] = 0.5 * (v[0] + v[1]);
  v[4] = 0.5 * (v[1] + v[2]);
  v[5] = 0.5 * (v[0] + v[2]);
  minimize_edge_energy(kEdges, v, kFixed, p, opts);
  return {lo + span * v[3], lo + span * v[4], lo + span * v[5]};
}

FractalFunction extend_pharmonic(const FractalFunction& u, const GasketLevel& coarse, const GasketLevel& fine,
                                 double p, const ConvexSolveOptions& opts) {
  require_same_level(u, coarse);
  if (fine.level() != coarse.level() + 1) throw DimensionError("extend_pharmonic: fine level must be coarse level + 1");
  if (!(p > 1.0)) throw PreconditionError("extend_pharmonic requires p > 1");

  std::vector<double> out(fine.vertex_count());
  const auto src = u.values();
  std::copy(src.begin(), src.end(), out.begin());
  const auto cells = coarse.cells();
  for (CellIndex c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    const auto y = extend_cell({src[cell[0]], src[cell[1]], src[cell[2]]}, p, opts);
    const auto mids = fine.child_midpoints(c);
    for (int i = 0; i < 3; ++i) out[mids[i]] = y[i];
  }
  return FractalFunction(fine.level(), std::move(out), u.dirichlet());
}

double minimal_boundary_energy(const GasketLevel& g, double p, std::vector<double>* minimizer,
                               const std::vector<double>* warm_start) {
  std::vector<double> u;
  if (warm_start != nullptr && warm_start->size() == g.vertex_count()) {
    u = *warm_start;
  } else {
    // Affine interpolation of (0,0,1): the q3 barycentric weight.
    u.resize(g.vertex_count());
    const auto coords = g.coords();
    for (std::size_t v = 0; v < u.size(); ++v) u[v] = std::ldexp(static_cast<double>(coords[v].k), -g.level());
  }
  u[0] = 0.0;
  u[1] = 0.0;
  u[2] = 1.0;
  std::vector<std::uint8_t> fixed(g.vertex_count(), 0);
  for (VertexId b : GasketLevel::boundary()) fixed[b] = 1;
  const auto res = minimize_edge_energy(g.edges(), u, fixed, p);
  if (minimizer != nullptr) *minimizer = std::move(u);
  return res.energy;
}

RpEstimate estimate_rp_detailed(double p, double tol, int max_level) {
  if (!(p > 1.0)) throw PreconditionError("estimate_rp requires p > 1");
  if (!(tol > 0.0)) throw PreconditionError("estimate_rp requires tol > 0");

  RpEstimate est;
  est.tolerance = tol;
  GasketLevel prev = build_level(0);
  std::vector<double> prev_min = {0.0, 0.0, 1.0};
  double prev_rho = a_p(0.0, 0.0, 1.0, p);
  for (int m = 1; m <= max_level; ++m) {
    GasketLevel g = build_level(m);
    const FractalFunction prev_fn(m - 1, prev_min, false);
    const FractalFunction extended = extend_pharmonic(prev_fn, prev, g, p);
    const std::vector<double> warm(extended.values().begin(), extended.values().end());
    std::vector<double> minimizer;
    const double rho = minimal_boundary_energy(g, p, &minimizer, &warm);
    est.ratios.push_back(rho / prev_rho);
    const std::size_t n = est.ratios.size();
    if (n >= 2 && std::abs(est.ratios[n - 1] - est.ratios[n - 2]) < tol) {
      est.r_p = est.ratios.back();
      est.levels_used = m;
      if (!(est.r_p > 0.0 && est.r_p < 1.0)) throw InvariantError("estimated r_p outside (0,1)");
      return est;
    }
    prev = std::move(g);
    prev_min = std::move(minimizer);
    prev_rho = rho;
  }
  const std::size_t n = est.ratios.size();
  char buf[160];
  std::snprintf(buf, sizeof buf, "r_p ratio iteration did not settle within %d levels; last ratios %.17g, %.17g",
                max_level, n >= 2 ? est.ratios[n - 2] : 0.0, n >= 1 ? est.ratios[n - 1] : 0.0);
  throw ConvergenceError(buf, n >= 2 ? std::abs(est.ratios[n - 1] - est.ratios[n - 2]) : 0.0);
}

double estimate_rp(double p, double tol) { return estimate_rp_detailed(p, tol).r_p; }

std::vector<double> energy_gradient(std::span<const double> u, const GasketLevel& g, const EnergyModel& em) {
  if (u.size() != g.vertex_count()) throw DimensionError("energy_gradient: length mismatch");
  require_model_level(g, em);
  const double scale = renormalization(em, g.level());
  const double p = em.p;
  std::vector<double> grad(u.size(), 0.0);
  for (const Edge& e : g.edges()) {
    const double d = u[e.a] - u[e.b];
    const double ad = std::abs(d);
    if (ad == 0.0) continue;
    const double gd = scale * p * std::pow(ad, p - 1.0) * (d > 0 ? 1.0 : -1.0);
    grad[e.a] += gd;
    grad[e.b] -= gd;
  }
  return grad;
}

std::vector<double> energy_gradient(const FractalFunction& u, const GasketLevel& g, const EnergyModel& em) {
  require_same_level(u, g);
  return energy_gradient(u.values(), g, em);
}

double energy_form(const FractalFunction& u, const FractalFunction& v, const GasketLevel& g, const EnergyModel& em) {
  require_same_level(u, g);
  require_same_level(v, g);
  const auto grad = energy_gradient(u.values(), g, em);
  double s = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) s += grad[i] * v[i];
  return s / em.p;
}

EmbeddingResult embedding_extremal(const GasketLevel& g, const EnergyModel& em, const ConvexSolveOptions& opts) {
  require_model_level(g, em);
  em.check();
  if (g.level() < 1) throw PreconditionError("embedding constant requires level >= 1");

  const std::size_t n = g.vertex_count();
  const double scale = renormalization(em, g.level());
  std::vector<std::uint8_t> fixed(n, 0);
  for (VertexId b : GasketLevel::boundary()) fixed[b] = 1;

  EmbeddingResult best;
  best.min_energy = std::numeric_limits<double>::infinity();
  std::vector<double> u(n);
  std::vector<double> best_u;
  for (VertexId x = 3; x < n; ++x) {
    std::fill(u.begin(), u.end(), 0.0);
    u[x] = 1.0;
    fixed[x] = 1;
    if (em.p != 2.0) minimize_edge_energy(g.edges(), u, fixed, 2.0, opts);
    const double crude = minimize_edge_energy(g.edges(), u, fixed, em.p, opts).energy;
    fixed[x] = 0;
    const double e = crude * scale;
    if (e < best.min_energy) {
      best.min_energy = e;
      best.argmax = x;
      best_u = u;
    }
  }
  best.K = std::pow(best.min_energy, -1.0 / em.p);
  best.extremal = FractalFunction(g.level(), std::move(best_u), true);
  return best;
}

double embedding_constant(const GasketLevel& g, const EnergyModel& em) { return embedding_extremal(g, em).K; }

}  // namespace gplap
