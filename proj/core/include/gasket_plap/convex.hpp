#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gasket_plap/gasket.hpp"

namespace gplap {

struct ConvexSolveOptions {
  double grad_tol = 1e-12;
  int max_iters = 200;
  /// Floor on |difference| when forming second derivatives of |x|^p.
  /// Only the Newton model is smoothed; the objective is always exact.
  double huber = 1e-14;
};

struct ConvexSolveResult {
  double energy = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
};

/// Sum over edges of |u_a - u_b|^p.
double edge_energy(std::span<const Edge> edges, std::span<const double> u, double p);

/// Minimizes the edge energy over the entries of `u` whose `fixed` flag is
/// zero, in place. Damped Newton with Armijo backtracking; steepest descent
/// is used whenever the Newton model is singular or not a descent direction.
/// Throws ConvergenceError (carrying the gradient sup-norm) on failure.
ConvexSolveResult minimize_edge_energy(std::span<const Edge> edges, std::vector<double>& u,
                                       std::span<const std::uint8_t> fixed, double p,
                                       const ConvexSolveOptions& opts = {});

}  // namespace gplap
