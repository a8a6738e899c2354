#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "gasket_plap/energy.hpp"
#include "gasket_plap/functional.hpp"
#include "gasket_plap/gasket.hpp"
#include "gasket_plap/solver.hpp"

namespace gplap {

/// Contents of `report.json`. Unavailable numbers (a failed branch, an
/// undefined delta1) are NaN in memory and null on disk.
struct RunReport {
  struct Spec {
    double a = 0.0;
    double b = 0.0;
    double k = 0.0;
    double p = 0.0;
    double q = 0.0;
    double l = 0.0;
    double lambda = 0.0;
    int level = 0;
    std::string f;
    std::string g;
  } spec;
  struct ThresholdBlock {
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double lambda1 = 0.0;
    double lambda_hat1 = 0.0;
    double delta1 = 0.0;
    double K = 0.0;
    double f_norm = 0.0;
    double g_norm = 0.0;
  } thresholds;
  struct Solutions {
    double I_plus = 0.0;
    double I_minus = 0.0;
    double residual_inf_plus = 0.0;
    double residual_inf_minus = 0.0;
    int iterations = 0;
  } solutions;
  struct Model {
    double p = 0.0;
    double r_p = 0.0;
    int level = 0;
  } energy_model;
  struct Provenance {
    std::uint64_t seed = 0;
    std::string version;
  } provenance;
  /// UTC ISO-8601; outside the determinism contract.
  std::string timestamp;
};

/// Field-wise equality with NaN == NaN; the timestamp is ignored.
bool same_report(const RunReport& x, const RunReport& y);

RunReport make_run_report(const ProblemSpec& spec, const std::string& f_text, const std::string& g_text,
                          const SolutionReport& sol, const EnergyModel& em, std::uint64_t seed);

const char* library_version();
std::string utc_timestamp();

std::string report_to_json(const RunReport& r);
/// Throws IoError on malformed input or missing keys.
RunReport parse_report(const std::string& json_text);
RunReport read_report(const std::filesystem::path& path);

/// CSV `id,x,y,u_plus,u_minus`, one row per vertex.
void write_solution_csv(const GasketLevel& g, const FractalFunction& u_plus, const FractalFunction& u_minus,
                        std::ostream& os);

/// Writes report.json and solution.csv into `dir` (created if missing).
/// Errors name the offending path.
void emit_report(const RunReport& r, const GasketLevel& g, const FractalFunction& u_plus,
                 const FractalFunction& u_minus, const std::filesystem::path& dir);

/// Writes `text` to `path`, throwing IoError naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gplap
