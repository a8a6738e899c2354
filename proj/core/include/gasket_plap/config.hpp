#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gasket_plap/functional.hpp"
#include "gasket_plap/gasket.hpp"
#include "gasket_plap/solver.hpp"

namespace gplap {

/// Coefficient family for f or g:
///   const:c          constant c
///   affine:ax,ay,c   ax*x + ay*y + c on vertex coordinates
///   csv:<path>       per-vertex values, rows `id,value` matched by id
struct CoefficientSpec {
  enum class Kind { Const, Affine, Csv };
  Kind kind = Kind::Const;
  double ax = 0.0;
  double ay = 0.0;
  double c = 1.0;
  std::string path;

  static CoefficientSpec parse(const std::string& text);
  /// Canonical text form; parse(to_string()) reproduces the coefficient.
  std::string to_string() const;
  std::vector<double> evaluate(const GasketLevel& g) const;

  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

enum class RunMode { Solve, Sweep, Fibering, Thresholds, Validate };
const char* to_string(RunMode m);

struct RunConfig {
  double a = 1.0;
  double b = 1.0;
  double k = 1.0;
  double p = 2.0;
  double q = 1.5;
  double l = 5.0;
  /// Absolute lambda; when unset the run uses lambda_frac * lambda_hat_1.
  std::optional<double> lambda;
  double lambda_frac = 0.5;
  int level = 5;
  CoefficientSpec f;
  CoefficientSpec g;
  SolveOptions solve;
  /// Tolerance for the r_p estimate (ignored at p = 2, where r_p = 3/5).
  double rp_tol = 1e-6;
  std::string out_dir = ".";
  RunMode mode = RunMode::Solve;
  /// Sweep grid as fractions of lambda_hat_1 or as absolute values.
  std::vector<double> sweep_fracs;
  std::vector<double> sweep_lambdas;
  /// Fibering dump: log-spaced grid on [t_min, t_max].
  double t_min = 1e-3;
  double t_max = 1e3;
  int t_points = 200;
  bool dump_fibering = false;

  /// ProblemSpec with the scalar constants and the given lambda; the
  /// coefficient samples are filled from `f` and `g` on `gasket`.
  ProblemSpec problem(const GasketLevel& gasket, double lambda_value) const;
};

/// Parses command-line flags (argv[0] is skipped). A `--config <file>` of
/// `key = value` lines supplies defaults that flags override. Throws
/// ConfigError naming the violated condition. Returns nullopt when help
/// was requested, after printing usage to `help_out`.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::string* help_out = nullptr);

}  // namespace gplap
