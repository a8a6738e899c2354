#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gasket_plap/config.hpp"
#include "gasket_plap/driver.hpp"
#include "gasket_plap/errors.hpp"
#include "gasket_plap/report.hpp"
#include "gasket_plap/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kIoError = 4;

int run(const gplap::RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.mode == gplap::RunMode::Validate) {
    const auto results = gplap::validation::run_all();
    gplap::validation::print_table(results, std::cout);
    for (const auto& r : results) {
      if (!r.pass) return kValidationFailed;
    }
    return kOk;
  }

  const gplap::Session session(cfg);
  const fs::path out = cfg.out_dir;
  switch (cfg.mode) {
    case gplap::RunMode::Thresholds: {
      gplap::print_thresholds(session, std::cout);
      fs::create_directories(out);
      gplap::write_text_file(out / "thresholds.json", gplap::thresholds_json(session));
      return kOk;
    }
    case gplap::RunMode::Fibering: {
      const auto dump = gplap::run_fibering(session);
      std::cout << "case " << gplap::to_string(dump.roots.case_tag) << ", regime "
                << gplap::to_string(dump.roots.regime) << '\n';
      for (const auto& root : dump.roots.roots) {
        std::cout << "root t = " << root.t << " (" << gplap::to_string(root.kind) << ")\n";
      }
      std::cout << "wrote " << (out / "fibering.csv").string() << '\n';
      return kOk;
    }
    case gplap::RunMode::Sweep: {
      const auto grid = gplap::sweep_grid(session);
      const auto rows = gplap::run_sweep(session, grid);
      std::ostringstream csv;
      gplap::write_sweep_csv(rows, csv);
      fs::create_directories(out);
      gplap::write_text_file(out / "sweep.csv", csv.str());
      int ok = 0;
      for (const auto& r : rows) ok += r.status == "ok" ? 1 : 0;
      std::cout << rows.size() << " sweep rows, " << ok << " certified; wrote " << (out / "sweep.csv").string()
                << '\n';
      return kOk;
    }
    case gplap::RunMode::Solve: {
      const gplap::SolveOutcome o = gplap::run_solve(session);
      gplap::emit_report(o.report, session.gasket(), o.solution.u_plus, o.solution.u_minus, out);
      if (cfg.dump_fibering && std::isfinite(o.solution.I_plus)) {
        std::ostringstream csv;
        const auto prof = gplap::profile(o.solution.u_plus, session.spec(), session.gasket(), session.model());
        gplap::write_fibering_csv(prof, gplap::log_grid(cfg.t_min, cfg.t_max, cfg.t_points), csv);
        gplap::write_text_file(out / "fibering.csv", csv.str());
      }
      gplap::print_solve_summary(o, std::cout);
      std::cout << "wrote " << (out / "report.json").string() << '\n';
      if (!o.solution.failure.empty()) return kSolverError;
      return kOk;
    }
    case gplap::RunMode::Validate:
      break;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    std::string help;
    const auto cfg = gplap::parse_config(args, &help);
    if (!cfg) {
      std::cout << help;
      return kOk;
    }
    return run(*cfg);
  } catch (const gplap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const gplap::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kConfigError;
  } catch (const gplap::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const gplap::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kSolverError;
  } catch (const gplap::ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kSolverError;
  } catch (const gplap::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
}
