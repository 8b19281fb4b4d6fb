#pragma once

// Suite reports: {config, summary, records[], version} as JSON, or the
// records flattened to CSV. Numbers use the shortest round-trip form so a
// fixed seed gives byte-identical output.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mhm/circle.hpp"

namespace mhm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for the rest.
inline std::string decimal(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// JSON number when finite, otherwise the decimal token as a string.
inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(decimal(x)); }

/// A point in angle form and in the chart at omega.
inline Json point_json(CirclePoint p, CirclePoint omega) {
  return Json{{"angle", p.theta()}, {"chart", decimal(p.chart(omega))}};
}

inline Json pair_json(const PointPair& a, CirclePoint omega) {
  return Json::array({point_json(a.p(), omega), point_json(a.q(), omega)});
}

struct CheckRecord {
  std::int64_t index = 0;  // sample index; with the seed it reproduces the inputs
  std::string check;
  Json inputs = Json::object();
  Json values = Json::object();
  double slack = 0.0;  // >= 0 when the check passes with margin
  bool pass = true;
};

struct Summary {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  Json extra = Json::object();
};

struct Report {
  Json config = Json::object();
  Summary summary;
  std::vector<CheckRecord> records;
  std::string version = kVersion;

  bool passed() const { return summary.violations == 0; }
};

inline Json record_json(const CheckRecord& r) {
  return Json{{"index", r.index}, {"check", r.check}, {"pass", r.pass},
              {"slack", number(r.slack)}, {"inputs", r.inputs}, {"values", r.values}};
}

inline Json to_json(const Report& rep) {
  Json summary{{"checks", rep.summary.checks},
               {"violations", rep.summary.violations},
               {"min_slack", number(rep.summary.min_slack)},
               {"passed", rep.passed()}};
  for (const auto& [k, v] : rep.summary.extra.items()) summary[k] = v;
  Json records = Json::array();
  for (const auto& r : rep.records) records.push_back(record_json(r));
  return Json{{"config", rep.config}, {"summary", summary}, {"records", records}, {"version", rep.version}};
}

inline std::string report_json_text(const Report& rep) { return to_json(rep).dump(2) + "\n"; }

namespace detail {

inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, decimal(j.get<double>()));
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

/// One row per record; columns are the union of flattened record keys in
/// order of first appearance.
inline std::string report_csv_text(const Report& rep) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  for (const auto& r : rep.records) {
    std::vector<std::pair<std::string, std::string>> row;
    detail::flatten(record_json(r), "", row);
    for (const auto& [k, v] : row) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
    rows.push_back(std::move(row));
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << detail::csv_field(columns[i]);
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::string cell;
      for (const auto& [k, v] : row)
        if (k == columns[i]) cell = v;
      out << (i ? "," : "") << detail::csv_field(cell);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mhm
