#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gasket_plap/config.hpp"
#include "gasket_plap/fibering.hpp"
#include "gasket_plap/report.hpp"
#include "gasket_plap/solver.hpp"

namespace gplap {

/// Everything a run needs at one level: the gasket, the energy model (r_p
/// from the cache, or exactly 3/5 at p = 2), the solver and the problem
/// with lambda resolved.
class Session {
 public:
  explicit Session(const RunConfig& cfg);

  const RunConfig& config() const noexcept { return cfg_; }
  const GasketLevel& gasket() const noexcept { return *gasket_; }
  const EnergyModel& model() const noexcept { return em_; }
  const NehariSolver& solver() const noexcept { return *solver_; }
  /// Problem at the configured lambda (absolute, or lambda_frac * lambda_hat_1).
  const ProblemSpec& spec() const noexcept { return spec_; }
  const Thresholds& thresholds() const noexcept { return thresholds_; }

 private:
  RunConfig cfg_;
  std::unique_ptr<GasketLevel> gasket_;
  EnergyModel em_;
  std::unique_ptr<NehariSolver> solver_;
  ProblemSpec spec_;
  Thresholds thresholds_;
};

struct SolveOutcome {
  RunReport report;
  SolutionReport solution;
};

/// Two-solution run at the session's lambda. Throws PreconditionError when
/// lambda >= lambda_hat_1.
SolveOutcome run_solve(const Session& s);

struct SweepRow {
  double lambda = 0.0;
  double lambda_frac = 0.0;  ///< lambda / lambda_hat_1
  double lambda_hat1 = 0.0;
  double delta1 = 0.0;
  bool plus_ok = false;
  bool minus_ok = false;
  double I_plus = 0.0;
  double I_minus = 0.0;
  double residual_inf_plus = 0.0;
  double residual_inf_minus = 0.0;
  bool delta1_certified = false;
  /// "ok" only when lambda < lambda_hat_1 and both branches certified;
  /// otherwise the reasons, separated by "; ".
  std::string status;
};

/// One two-solution run per lambda; failures are recorded in the row and
/// the sweep continues. Rows at or above lambda_hat_1 are computed without
/// the threshold guard and never report "ok".
std::vector<SweepRow> run_sweep(const Session& s, std::span<const double> lambdas);

/// Grid from the config: absolute lambdas, else fractions of lambda_hat_1.
std::vector<double> sweep_grid(const Session& s);

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& os);

/// Log-spaced grid of `n` points on [t_min, t_max].
std::vector<double> log_grid(double t_min, double t_max, int n);

struct FiberingDump {
  FiberingProfile profile;
  FiberingRoots roots;
};

/// Fibering profile of the energy-normalized embedding extremal at the
/// session's lambda; writes fibering.csv into the output directory.
FiberingDump run_fibering(const Session& s);

/// Threshold table as JSON (same layout as the report's block).
std::string thresholds_json(const Session& s);

/// Human-readable summaries for the command-line tool.
void print_solve_summary(const SolveOutcome& o, std::ostream& os);
void print_thresholds(const Session& s, std::ostream& os);

}  // namespace gplap
