#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

namespace latc::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) {
  os << Json(s).dump();
}

inline void write_double(std::ostream& os, double v) {
  if (!std::isfinite(v)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep it a JSON float so it re-parses as a double
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  os << s;
}

inline void write(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ", ";
        first = false;
        write(os, v, indent, depth + 1);
      }
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      write_double(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Serializes with every double printed at 17 significant digits, which
/// round-trips IEEE binary64 exactly.
inline std::string dump(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::write(os, j, indent, 0);
  return os.str();
}

}  // namespace latc::io
