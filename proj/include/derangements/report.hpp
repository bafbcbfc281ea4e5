#pragma once

// JSON and CSV renderings of verification results. Needs nlohmann/json
// (vendored as json.hpp).

#include "derangements/verify.hpp"

#include "json.hpp"

#include <ctime>
#include <ostream>
#include <string>

namespace derangements::report {

inline constexpr const char* kSchemaVersion = "1.0";

inline std::string iso8601_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const verify::CheckResult& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["suite"] = r.suite;
  j["anchor"] = r.anchor;
  j["criterion"] = r.criterion;
  j["status"] = verify::status_name(r.status);
  j["value"] = r.value;
  if (!r.value_decimal.empty()) j["value_decimal"] = r.value_decimal;
  j["bound"] = r.bound;
  j["detail"] = r.detail;
  j["params"] = r.params;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline nlohmann::json to_json(const std::string& suite, const std::vector<verify::CheckResult>& results) {
  nlohmann::json j;
  j["version"] = kSchemaVersion;
  j["suite"] = suite;
  j["generated"] = iso8601_now();
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) j["results"].push_back(to_json(r));
  j["exit_code"] = verify::exit_code(results);
  return j;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const std::vector<verify::CheckResult>& results) {
  os << "id,anchor,status,value,bound,params\n";
  for (const auto& r : results) {
    std::string params;
    for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + v;
    os << csv_field(r.id) << ',' << csv_field(r.anchor) << ',' << verify::status_name(r.status) << ','
       << csv_field(r.value) << ',' << csv_field(r.bound) << ',' << csv_field(params) << '\n';
  }
}

}  // namespace derangements::report
