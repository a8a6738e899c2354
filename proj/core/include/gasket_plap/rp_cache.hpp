#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "gasket_plap/energy.hpp"

namespace gplap {

/// JSON sidecar mapping p (17 significant digits) to a previous r_p estimate.
///
///   { "2": {"r_p": 0.6, "tol": 1e-09, "levels_used": 2}, ... }
class RpCache {
 public:
  struct Entry {
    double r_p = 0.0;
    double tol = 0.0;
    int levels_used = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Resolves the cache path: $GASKET_PLAP_CACHE when set, else `fallback`.
  static std::filesystem::path resolve_path(const std::filesystem::path& fallback = "rp_cache.json");

  explicit RpCache(std::filesystem::path path);

  const std::filesystem::path& path() const noexcept { return path_; }

  static std::string key_for(double p);

  /// Entry for p whose tolerance is at least as tight as `tol`.
  std::optional<Entry> lookup(double p, double tol) const;
  void store(double p, const Entry& e);
  void save() const;

  /// Cached estimate when available, otherwise estimates, stores and saves.
  Entry get_or_estimate(double p, double tol);

 private:
  std::filesystem::path path_;
  std::map<std::string, Entry> entries_;
};

}  // namespace gplap
