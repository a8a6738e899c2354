#include "gasket_plap/convex.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gasket_plap/errors.hpp"

namespace gplap {

namespace {

constexpr std::size_t kDenseLimit = 16;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 80;

double sup_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

double edge_energy(std::span<const Edge> edges, std::span<const double> u, double p) {
  double e = 0.0;
  for (const Edge& ed : edges) e += std::pow(std::abs(u[ed.a] - u[ed.b]), p);
  return e;
}

ConvexSolveResult minimize_edge_energy(std::span<const Edge> edges, std::vector<double>& u,
                                       std::span<const std::uint8_t> fixed, double p,
                                       const ConvexSolveOptions& opts) {
  if (fixed.size() != u.size()) throw DimensionError("minimize_edge_energy: mask length mismatch");
  if (!(p > 1.0)) throw PreconditionError("minimize_edge_energy requires p > 1");

  constexpr int kFixed = -1;
  std::vector<int> index(u.size(), kFixed);
  int n = 0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    if (!fixed[v]) index[v] = n++;
  }

  ConvexSolveResult res;
  res.energy = edge_energy(edges, u, p);
  if (n == 0) return res;

  const bool dense = static_cast<std::size_t>(n) <= kDenseLimit;
  Eigen::VectorXd grad(n);
  Eigen::VectorXd step(n);
  Eigen::MatrixXd hd;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::SparseMatrix<double> hs(n, n);
  bool pattern_analyzed = false;
  std::vector<double> trial(u.size());

  for (int it = 0; it < opts.max_iters; ++it) {
    grad.setZero();
    if (dense) {
      hd.setZero(n, n);
    } else {
      triplets.clear();
      triplets.reserve(4 * edges.size());
    }
    double max_diag = 0.0;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    for (const Edge& ed : edges) {
      const int ia = index[ed.a];
      const int ib = index[ed.b];
      if (ia == kFixed && ib == kFixed) continue;
      const double d = u[ed.a] - u[ed.b];
      const double ad = std::abs(d);
      const double g = p * std::pow(ad, p - 1.0) * (d < 0 ? -1.0 : (d > 0 ? 1.0 : 0.0));
      const double h = p * (p - 1.0) * std::pow(std::max(ad, opts.huber), p - 2.0);
      if (ia != kFixed) {
        grad[ia] += g;
        diag[ia] += h;
      }
      if (ib != kFixed) {
        grad[ib] -= g;
        diag[ib] += h;
      }
      if (ia != kFixed && ib != kFixed) {
        if (dense) {
          hd(ia, ib) -= h;
          hd(ib, ia) -= h;
        } else {
          triplets.emplace_back(ia, ib, -h);
          triplets.emplace_back(ib, ia, -h);
        }
      }
    }
    res.grad_norm = sup_norm(grad);
    res.iterations = it;
    if (res.grad_norm <= opts.grad_tol) return res;

    max_diag = diag.maxCoeff();
    const double reg = std::max(1e-12 * max_diag, 1e-300);
    bool newton_ok = false;
    if (dense) {
      hd.diagonal() += diag;
      hd.diagonal().array() += reg;
      Eigen::LDLT<Eigen::MatrixXd> fact(hd);
      if (fact.info() == Eigen::Success) {
        step = fact.solve(-grad);
        newton_ok = step.allFinite();
      }
    } else {
      for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, diag[i] + reg);
      hs.setFromTriplets(triplets.begin(), triplets.end());
      if (!pattern_analyzed) {
        ldlt.analyzePattern(hs);
        pattern_analyzed = true;
      }
      ldlt.factorize(hs);
      if (ldlt.info() == Eigen::Success) {
        step = ldlt.solve(-grad);
        newton_ok = ldlt.info() == Eigen::Success && step.allFinite();
      }
    }
    double slope = newton_ok ? grad.dot(step) : 0.0;
    if (!newton_ok || !(slope < 0.0)) {
      step = -grad / std::max(max_diag, 1.0);
      slope = grad.dot(step);
      newton_ok = false;
    }
    const double decrement = -slope;
    if (newton_ok && decrement <= 1e-15 * std::max(res.energy, 1e-300)) return res;

    double alpha = 1.0;
    double trial_energy = res.energy;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      trial = u;
      for (std::size_t v = 0; v < u.size(); ++v) {
        if (index[v] != kFixed) trial[v] += alpha * step[index[v]];
      }
      trial_energy = edge_energy(edges, trial, p);
      if (trial_energy <= res.energy + kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    // For p < 2 the full Newton step flips near-zero edge differences
    // (d -> -d); shorter steps that keep lowering the energy damp this.
    while (accepted && p < 2.0 && alpha > 1e-3) {
      std::vector<double> shorter = u;
      for (std::size_t v = 0; v < u.size(); ++v) {
        if (index[v] != kFixed) shorter[v] += 0.5 * alpha * step[index[v]];
      }
      const double e = edge_energy(edges, shorter, p);
      if (!(e < trial_energy)) break;
      trial.swap(shorter);
      trial_energy = e;
      alpha *= 0.5;
    }
    if (!accepted) {
      // Floating-point floor: no representable decrease left.
      if (newton_ok && decrement <= 1e-10 * std::max(res.energy, 1e-300)) return res;
      throw ConvergenceError("convex energy solve stalled; gradient sup-norm " + std::to_string(res.grad_norm),
                             res.grad_norm);
    }
    const bool stagnant =
        res.energy - trial_energy <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(res.energy);
    u.swap(trial);
    res.energy = trial_energy;
    if (stagnant && newton_ok && decrement <= 1e-10 * std::max(res.energy, 1e-300)) return res;
  }
  throw ConvergenceError("convex energy solve hit iteration limit " + std::to_string(opts.max_iters) +
                             "; gradient sup-norm " + std::to_string(res.grad_norm),
                         res.grad_norm);
}

}  // namespace gplap
