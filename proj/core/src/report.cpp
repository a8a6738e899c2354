#include "gasket_plap/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "gasket_plap/errors.hpp"
#include "json_format.hpp"

#ifndef GASKET_PLAP_VERSION
#define GASKET_PLAP_VERSION "0.0.0"
#endif

namespace gplap {

namespace {

using ojson = nlohmann::ordered_json;

bool same(double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; }

ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

double get_num(const ojson& obj, const char* key) {
  if (!obj.contains(key)) throw IoError(std::string("report is missing key '") + key + "'");
  const ojson& v = obj.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw IoError(std::string("report key '") + key + "' is not a number");
  return v.get<double>();
}

const ojson& get_obj(const ojson& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_object()) {
    throw IoError(std::string("report is missing object '") + key + "'");
  }
  return obj.at(key);
}

}  // namespace

bool same_report(const RunReport& x, const RunReport& y) {
  const auto& a = x.spec;
  const auto& b = y.spec;
  const auto& ta = x.thresholds;
  const auto& tb = y.thresholds;
  const auto& sa = x.solutions;
  const auto& sb = y.solutions;
  return same(a.a, b.a) && same(a.b, b.b) && same(a.k, b.k) && same(a.p, b.p) && same(a.q, b.q) &&
         same(a.l, b.l) && same(a.lambda, b.lambda) && a.level == b.level && a.f == b.f && a.g == b.g &&
         same(ta.lambda2, tb.lambda2) && same(ta.lambda3, tb.lambda3) && same(ta.lambda1, tb.lambda1) &&
         same(ta.lambda_hat1, tb.lambda_hat1) && same(ta.delta1, tb.delta1) && same(ta.K, tb.K) &&
         same(ta.f_norm, tb.f_norm) && same(ta.g_norm, tb.g_norm) && same(sa.I_plus, sb.I_plus) &&
         same(sa.I_minus, sb.I_minus) && same(sa.residual_inf_plus, sb.residual_inf_plus) &&
         same(sa.residual_inf_minus, sb.residual_inf_minus) && sa.iterations == sb.iterations &&
         same(x.energy_model.p, y.energy_model.p) && same(x.energy_model.r_p, y.energy_model.r_p) &&
         x.energy_model.level == y.energy_model.level && x.provenance.seed == y.provenance.seed &&
         x.provenance.version == y.provenance.version;
}

const char* library_version() { return GASKET_PLAP_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunReport make_run_report(const ProblemSpec& spec, const std::string& f_text, const std::string& g_text,
                          const SolutionReport& sol, const EnergyModel& em, std::uint64_t seed) {
  RunReport r;
  r.spec = {spec.a, spec.b, spec.k, spec.p, spec.q, spec.l, spec.lambda, spec.level, f_text, g_text};
  const Thresholds& t = sol.thresholds;
  r.thresholds = {t.lambda2, t.lambda3, t.lambda1, t.lambda_hat1, t.delta1, t.K_used, t.f_norm, t.g_norm};
  const bool plus = std::isfinite(sol.I_plus);
  const bool minus = std::isfinite(sol.I_minus);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.solutions = {sol.I_plus, sol.I_minus, plus ? sol.residual_inf_plus : nan,
                 minus ? sol.residual_inf_minus : nan, sol.iterations};
  r.energy_model = {em.p, em.r_p, em.level};
  r.provenance = {seed, library_version()};
  r.timestamp = utc_timestamp();
  return r;
}

std::string report_to_json(const RunReport& r) {
  ojson j = ojson::object();
  j["spec"] = {{"a", num(r.spec.a)},         {"b", num(r.spec.b)}, {"k", num(r.spec.k)},
               {"p", num(r.spec.p)},         {"q", num(r.spec.q)}, {"l", num(r.spec.l)},
               {"lambda", num(r.spec.lambda)}, {"level", r.spec.level}, {"f", r.spec.f},
               {"g", r.spec.g}};
  j["thresholds"] = {{"lambda2", num(r.thresholds.lambda2)},   {"lambda3", num(r.thresholds.lambda3)},
                     {"lambda1", num(r.thresholds.lambda1)},   {"lambda_hat1", num(r.thresholds.lambda_hat1)},
                     {"delta1", num(r.thresholds.delta1)},     {"K", num(r.thresholds.K)},
                     {"f_norm", num(r.thresholds.f_norm)},     {"g_norm", num(r.thresholds.g_norm)}};
  j["solutions"] = {{"I_plus", num(r.solutions.I_plus)},
                    {"I_minus", num(r.solutions.I_minus)},
                    {"residual_inf_plus", num(r.solutions.residual_inf_plus)},
                    {"residual_inf_minus", num(r.solutions.residual_inf_minus)},
                    {"iterations", r.solutions.iterations}};
  j["energy_model"] = {{"p", num(r.energy_model.p)}, {"r_p", num(r.energy_model.r_p)},
                       {"level", r.energy_model.level}};
  j["provenance"] = {{"seed", r.provenance.seed}, {"version", r.provenance.version}};
  j["timestamp"] = r.timestamp;
  return dump_json(j) + "\n";
}

RunReport parse_report(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const ojson::exception& e) {
    throw IoError(std::string("malformed report JSON: ") + e.what());
  }
  RunReport r;
  try {
    const ojson& s = get_obj(j, "spec");
    r.spec = {get_num(s, "a"),      get_num(s, "b"), get_num(s, "k"),
              get_num(s, "p"),      get_num(s, "q"), get_num(s, "l"),
              get_num(s, "lambda"), s.at("level").get<int>(), s.at("f").get<std::string>(),
              s.at("g").get<std::string>()};
    const ojson& t = get_obj(j, "thresholds");
    r.thresholds = {get_num(t, "lambda2"), get_num(t, "lambda3"), get_num(t, "lambda1"), get_num(t, "lambda_hat1"),
                    get_num(t, "delta1"),  get_num(t, "K"),       get_num(t, "f_norm"),  get_num(t, "g_norm")};
    const ojson& so = get_obj(j, "solutions");
    r.solutions = {get_num(so, "I_plus"), get_num(so, "I_minus"), get_num(so, "residual_inf_plus"),
                   get_num(so, "residual_inf_minus"), so.at("iterations").get<int>()};
    const ojson& m = get_obj(j, "energy_model");
    r.energy_model = {get_num(m, "p"), get_num(m, "r_p"), m.at("level").get<int>()};
    const ojson& pv = get_obj(j, "provenance");
    r.provenance = {pv.at("seed").get<std::uint64_t>(), pv.at("version").get<std::string>()};
    r.timestamp = j.value("timestamp", "");
  } catch (const ojson::exception& e) {
    throw IoError(std::string("report JSON has an unexpected shape: ") + e.what());
  }
  return r;
}

RunReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_report(ss.str());
}

void write_solution_csv(const GasketLevel& g, const FractalFunction& u_plus, const FractalFunction& u_minus,
                        std::ostream& os) {
  require_same_level(u_plus, g);
  require_same_level(u_minus, g);
  os << "id,x,y,u_plus,u_minus\n";
  const auto pts = g.points();
  char buf[160];
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", v, pts[v].x, pts[v].y, u_plus[v], u_minus[v]);
    os << buf;
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_report(const RunReport& r, const GasketLevel& g, const FractalFunction& u_plus,
                 const FractalFunction& u_minus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_text_file(dir / "report.json", report_to_json(r));
  std::ostringstream csv;
  write_solution_csv(g, u_plus, u_minus, csv);
  write_text_file(dir / "solution.csv", csv.str());
}

}  // namespace gplap
