#pragma once

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <string>

namespace gplap {

/// Pretty-prints `j` with two-space indentation, writing every floating
/// point number with 17 significant digits. Non-finite numbers become null.
inline void dump_json_into(const nlohmann::ordered_json& j, std::string& out, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += nlohmann::ordered_json(it.key()).dump();
        out += ": ";
        dump_json_into(it.value(), out, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += '}';
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        pad(depth + 1);
        dump_json_into(j[i], out, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += ']';
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      // Keep floats recognizable as floats after a round trip.
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string dump_json(const nlohmann::ordered_json& j) {
  std::string out;
  dump_json_into(j, out, 0);
  return out;
}

}  // namespace gplap
