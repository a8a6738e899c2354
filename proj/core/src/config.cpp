#include "gasket_plap/config.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gasket_plap/errors.hpp"

namespace gplap {

namespace {

double parse_number(std::string_view s, const std::string& context) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(context + ": expected a number, got '" + std::string(s) + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(context + ": value must be finite");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CoefficientSpec CoefficientSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("coefficient '" + text + "': expected const:c, affine:ax,ay,c or csv:<path>");
  }
  const std::string family = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  CoefficientSpec c;
  if (family == "const") {
    c.kind = Kind::Const;
    c.c = parse_number(rest, "const coefficient");
  } else if (family == "affine") {
    const auto parts = split(rest, ',');
    if (parts.size() != 3) throw ConfigError("affine coefficient needs three numbers ax,ay,c");
    c.kind = Kind::Affine;
    c.ax = parse_number(parts[0], "affine ax");
    c.ay = parse_number(parts[1], "affine ay");
    c.c = parse_number(parts[2], "affine c");
  } else if (family == "csv") {
    if (rest.empty()) throw ConfigError("csv coefficient needs a path");
    c.kind = Kind::Csv;
    c.path = rest;
  } else {
    throw ConfigError("unknown coefficient family '" + family + "'");
  }
  return c;
}

std::string CoefficientSpec::to_string() const {
  switch (kind) {
    case Kind::Const:
      return "const:" + fmt17(c);
    case Kind::Affine:
      return "affine:" + fmt17(ax) + "," + fmt17(ay) + "," + fmt17(c);
    case Kind::Csv:
      return "csv:" + path;
  }
  return "";
}

std::vector<double> CoefficientSpec::evaluate(const GasketLevel& g) const {
  const std::size_t n = g.vertex_count();
  if (kind == Kind::Const) return std::vector<double>(n, c);
  if (kind == Kind::Affine) {
    std::vector<double> out(n);
    const auto pts = g.points();
    for (std::size_t v = 0; v < n; ++v) out[v] = ax * pts[v].x + ay * pts[v].y + c;
    return out;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coefficient file " + path);
  std::vector<double> out(n, 0.0);
  std::vector<bool> seen(n, false);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (row == 1 && cols.size() == 2 && cols[0].find_first_of("0123456789") == std::string_view::npos) continue;
    const std::string where = path + " row " + std::to_string(row);
    if (cols.size() != 2) throw ConfigError(where + ": expected `id,value`");
    const double id = parse_number(cols[0], where + " id");
    if (id < 0 || id != std::floor(id) || id >= static_cast<double>(n)) {
      throw ConfigError(where + ": vertex id " + std::string(cols[0]) + " does not exist at level " +
                        std::to_string(g.level()));
    }
    const auto v = static_cast<std::size_t>(id);
    if (seen[v]) throw ConfigError(where + ": duplicate vertex id " + std::to_string(v));
    seen[v] = true;
    out[v] = parse_number(cols[1], where + " value");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) throw ConfigError(path + ": no row for vertex id " + std::to_string(v) + " (after row " +
                                    std::to_string(row) + ")");
  }
  return out;
}

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Solve:
      return "solve";
    case RunMode::Sweep:
      return "sweep";
    case RunMode::Fibering:
      return "fibering";
    case RunMode::Thresholds:
      return "thresholds";
    case RunMode::Validate:
      return "validate";
  }
  return "?";
}

ProblemSpec RunConfig::problem(const GasketLevel& gasket, double lambda_value) const {
  ProblemSpec s;
  s.a = a;
  s.b = b;
  s.k = k;
  s.p = p;
  s.q = q;
  s.l = l;
  s.lambda = lambda_value;
  s.level = gasket.level();
  s.f_values = f.evaluate(gasket);
  s.g_values = g.evaluate(gasket);
  return s;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::string* help_out) {
  RunConfig cfg;
  CLI::App app{"Nehari-manifold solver for a Kirchhoff p-Laplacian problem on the Sierpinski gasket",
               "gasket_plap"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "key = value file; flags override its entries");

  std::optional<double> lambda;
  std::string f_text = "const:1";
  std::string g_text = "const:1";
  std::string mode_text = "solve";
  std::int64_t seed = 1;

  app.add_option("--p", cfg.p, "exponent p > 1");
  app.add_option("--q", cfg.q, "concave exponent, 1 < q < p");
  app.add_option("--l", cfg.l, "convex exponent, l > p(k+1)");
  app.add_option("--k", cfg.k, "Kirchhoff exponent k > 0");
  app.add_option("--a", cfg.a, "Kirchhoff coefficient a > 0");
  app.add_option("--b", cfg.b, "Kirchhoff coefficient b > 0");
  auto* lam = app.add_option("--lambda", lambda, "absolute lambda");
  app.add_option("--lambda-frac", cfg.lambda_frac, "lambda as a fraction of lambda_hat_1 (default 0.5)")
      ->excludes(lam);
  app.add_option("--level", cfg.level, "gasket level m");
  app.add_option("--f", f_text, "f coefficient: const:c | affine:ax,ay,c | csv:<path>");
  app.add_option("--g", g_text, "g coefficient: const:c | affine:ax,ay,c | csv:<path>");
  app.add_option("--mode", mode_text, "solve | sweep | fibering | thresholds | validate")
      ->check(CLI::IsMember({"solve", "sweep", "fibering", "thresholds", "validate"}));
  app.add_option("--out", cfg.out_dir, "output directory");
  app.add_option("--seed", seed, "restart seed");
  app.add_option("--restarts", cfg.solve.restarts, "restarts per branch");
  app.add_option("--max-iters", cfg.solve.max_iters, "iterations per restart");
  app.add_option("--step0", cfg.solve.step0, "initial step length");
  app.add_option("--grad-tol", cfg.solve.grad_tol, "relative weak-residual tolerance");
  app.add_flag("--warm-start-levels", cfg.solve.warm_start_levels, "seed restarts from the level m-1 solution");
  app.add_option("--rp-tol", cfg.rp_tol, "tolerance of the r_p estimate");
  app.add_option("--sweep-fracs", cfg.sweep_fracs, "sweep grid as fractions of lambda_hat_1")->delimiter(',');
  app.add_option("--sweep-lambdas", cfg.sweep_lambdas, "sweep grid of absolute lambdas")->delimiter(',');
  app.add_option("--t-min", cfg.t_min, "fibering grid start");
  app.add_option("--t-max", cfg.t_max, "fibering grid end");
  app.add_option("--t-points", cfg.t_points, "fibering grid size");
  app.add_flag("--dump-fibering", cfg.dump_fibering, "solve mode: also write fibering.csv");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    if (help_out) *help_out = app.help();
    return std::nullopt;
  } catch (const CLI::FileError& e) {
    throw IoError(e.what());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  cfg.lambda = lambda;
  cfg.f = CoefficientSpec::parse(f_text);
  cfg.g = CoefficientSpec::parse(g_text);
  cfg.solve.seed = static_cast<std::uint64_t>(seed);
  if (mode_text == "solve") cfg.mode = RunMode::Solve;
  if (mode_text == "sweep") cfg.mode = RunMode::Sweep;
  if (mode_text == "fibering") cfg.mode = RunMode::Fibering;
  if (mode_text == "thresholds") cfg.mode = RunMode::Thresholds;
  if (mode_text == "validate") cfg.mode = RunMode::Validate;

  // The problem constants are checked here so that a bad run never starts.
  ProblemSpec probe;
  probe.a = cfg.a;
  probe.b = cfg.b;
  probe.k = cfg.k;
  probe.p = cfg.p;
  probe.q = cfg.q;
  probe.l = cfg.l;
  probe.lambda = cfg.lambda.value_or(1.0);
  probe.level = cfg.level;
  try {
    probe.validate_constants();
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.level < 1 || cfg.level > GasketLevel::kMaxLevel) {
    throw ConfigError("requires 1 <= level <= " + std::to_string(GasketLevel::kMaxLevel));
  }
  if (!cfg.lambda && !(cfg.lambda_frac > 0.0)) throw ConfigError("requires lambda-frac > 0");
  if (!(cfg.rp_tol > 0.0)) throw ConfigError("requires rp-tol > 0");
  if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min) || cfg.t_points < 2) {
    throw ConfigError("requires 0 < t-min < t-max and t-points >= 2");
  }
  for (double x : cfg.sweep_fracs) {
    if (!(x > 0.0)) throw ConfigError("sweep fractions must be positive");
  }
  for (double x : cfg.sweep_lambdas) {
    if (!(x > 0.0)) throw ConfigError("requires lambda > 0 in the sweep grid");
  }
  try {
    cfg.solve.check();
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace gplap
