#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gasket_plap/energy.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/functional.hpp"

namespace gplap {

struct SolveOptions {
  int restarts = 8;
  int max_iters = 5000;
  double step0 = 1.0;
  /// Stop when ||grad I(u)||_inf <= grad_tol * gradient_term_scale(u).
  double grad_tol = 1e-12;
  std::uint64_t seed = 1;
  /// Solve one level coarser first and add the p-harmonically extended
  /// solutions as starting directions.
  bool warm_start_levels = false;
  /// Enforce lambda < lambda_1 (plus) and lambda < lambda_hat_1 (minus).
  bool check_threshold = true;

  void check() const;
};

enum class Branch { Plus, Minus };
const char* to_string(Branch b);

struct RestartOutcome {
  bool admissible = false;
  bool converged = false;
  double value = 0.0;  ///< I at the projected point
  int iterations = 0;
  double grad_norm = 0.0;
  std::string note;
};

struct BranchResult {
  FractalFunction u;  ///< Nehari member t* w of the best restart
  double I = 0.0;
  double t_star = 1.0;
  int best_restart = -1;
  int iterations = 0;     ///< summed over restarts
  int restarts_used = 0;  ///< restarts that found an admissible direction
  bool converged = false;
  /// Restarts disagree on the minimum by more than 1e-6 relative.
  bool multimodal = false;
  NehariClass certificate;
  std::vector<RestartOutcome> restarts;
};

struct WeakResidual {
  std::vector<double> residual;  ///< boundary entries are 0
  double inf_norm = 0.0;
  /// ||grad E(u)||_inf, the scale the residual is judged against.
  double energy_grad_inf = 0.0;
  bool trivial = false;  ///< u == 0
};

struct SolutionReport {
  FractalFunction u_plus;
  FractalFunction u_minus;
  double I_plus = 0.0;
  double I_minus = 0.0;
  double residual_inf_plus = 0.0;
  double residual_inf_minus = 0.0;
  double energy_grad_inf_plus = 0.0;
  double energy_grad_inf_minus = 0.0;
  Thresholds thresholds;
  int iterations = 0;
  int restarts_used = 0;
  NehariClass class_plus;
  NehariClass class_minus;
  /// The best restart met the residual stopping test.
  bool converged_plus = false;
  bool converged_minus = false;
  /// Classified on the advertised branch and converged.
  bool plus_ok = false;
  bool minus_ok = false;
  bool multimodal_plus = false;
  bool multimodal_minus = false;
  /// I_minus >= delta1 - 1e-8.
  bool delta1_certified = false;
  /// Explicit cause when either branch failed.
  std::string failure;
};

struct ContinuityRow {
  double eps = 0.0;
  double t_bar = 1.0;
  bool available = true;
};

/// Shared per-level state: sharp embedding constant, its extremal function
/// and the factorized Dirichlet Laplacian used as the descent metric.
class NehariSolver {
 public:
  NehariSolver(const GasketLevel& g, const EnergyModel& em);
  ~NehariSolver();
  NehariSolver(NehariSolver&&) noexcept;
  NehariSolver& operator=(NehariSolver&&) noexcept;

  const GasketLevel& gasket() const noexcept { return *g_; }
  const EnergyModel& model() const noexcept { return em_; }
  const EmbeddingResult& embedding() const noexcept { return emb_; }

  Thresholds thresholds(const ProblemSpec& spec) const;

  BranchResult minimize(Branch branch, const ProblemSpec& spec, const SolveOptions& opts,
                        std::span<const FractalFunction> extra_starts = {}) const;

  SolutionReport two_solutions(const ProblemSpec& spec, const SolveOptions& opts) const;

 private:
  struct Impl;
  const GasketLevel* g_;
  EnergyModel em_;
  EmbeddingResult emb_;
  std::unique_ptr<Impl> impl_;
};

/// Gradient of I at u (boundary entries zero).
std::vector<double> euler_gradient(std::span<const double> u, const ProblemSpec& spec, const GasketLevel& g,
                                   const EnergyModel& em);

std::pair<FractalFunction, double> minimize_on_plus(const ProblemSpec& spec, const GasketLevel& g,
                                                    const EnergyModel& em, const SolveOptions& opts);
std::pair<FractalFunction, double> minimize_on_minus(const ProblemSpec& spec, const GasketLevel& g,
                                                     const EnergyModel& em, const SolveOptions& opts);

/// Largest per-vertex sum of |terms| in the gradient of I at u; the scale
/// the solver's stopping test measures the residual against.
double gradient_term_scale(std::span<const double> u, const ProblemSpec& spec, const GasketLevel& g,
                           const EnergyModel& em);

WeakResidual weak_residual(const FractalFunction& u, const ProblemSpec& spec, const GasketLevel& g,
                           const EnergyModel& em);

SolutionReport two_solutions(const ProblemSpec& spec, const GasketLevel& g, const EnergyModel& em,
                             const SolveOptions& opts);

/// Fibering scale of u0 + eps w on the branch of u0, for each eps.
std::vector<ContinuityRow> perturbation_continuity_check(const FractalFunction& u0, const FractalFunction& w,
                                                         std::span<const double> eps_ladder,
                                                         const ProblemSpec& spec, const GasketLevel& g,
                                                         const EnergyModel& em, Branch branch = Branch::Plus);

}  // namespace gplap
