#include "gasket_plap/rp_cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "gasket_plap/errors.hpp"
#include "json_format.hpp"

namespace gplap {

std::filesystem::path RpCache::resolve_path(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("GASKET_PLAP_CACHE"); env != nullptr && *env != '\0') return env;
  return fallback;
}

RpCache::RpCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& [key, val] : doc.items()) {
      entries_[key] = Entry{val.at("r_p").get<double>(), val.at("tol").get<double>(), val.at("levels_used").get<int>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed r_p cache " + path_.string() + ": " + e.what());
  }
}

std::string RpCache::key_for(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

std::optional<RpCache::Entry> RpCache::lookup(double p, double tol) const {
  const auto it = entries_.find(key_for(p));
  if (it == entries_.end() || it->second.tol > tol) return std::nullopt;
  return it->second;
}

void RpCache::store(double p, const Entry& e) { entries_[key_for(p)] = e; }

void RpCache::save() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [key, e] : entries_) {
    doc[key] = {{"r_p", e.r_p}, {"tol", e.tol}, {"levels_used", e.levels_used}};
  }
  std::ofstream out(path_);
  if (!out) throw IoError("cannot write r_p cache " + path_.string());
  out << dump_json(doc) << '\n';
  if (!out) throw IoError("failed writing r_p cache " + path_.string());
}

RpCache::Entry RpCache::get_or_estimate(double p, double tol) {
  if (auto hit = lookup(p, tol)) return *hit;
  const RpEstimate est = estimate_rp_detailed(p, tol);
  Entry e{est.r_p, tol, est.levels_used};
  store(p, e);
  save();
  return e;
}

}  // namespace gplap
