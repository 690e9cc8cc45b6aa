#pragma once

// Structured result records: one line-delimited JSON object per computed
// quantity, with optional expected values, provenance tags and pass/fail
// against a tolerance. Identical configurations and seeds produce
// byte-identical streams.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isolink/geometry.hpp"

namespace isolink {

inline constexpr int kSchemaVersion = 1;

struct ResultRecord {
  std::string op;
  std::string inputs;                 // canonical digest of the inputs
  std::vector<double> values;
  std::optional<double> stderr_;
  std::optional<bool> converged;
  std::optional<double> expected;
  std::string provenance;             // "PAPER:...", "DERIVED:...", "TRIVIAL"
  std::optional<double> tolerance;
  std::optional<bool> pass;

  // expected-value records must carry a tolerance
  void set_expectation(double exp, std::string prov, double tol) {
    expected = exp;
    provenance = std::move(prov);
    tolerance = tol;
    double got = values.empty() ? 0.0 : values.front();
    pass = std::abs(got - exp) <= tol;
  }
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest(const std::string& canonical) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical);
  return os.str();
}

inline nlohmann::ordered_json to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["op"] = r.op;
  j["inputs"] = r.inputs;
  j["values"] = r.values;
  if (r.stderr_) j["stderr"] = *r.stderr_;
  if (r.converged) j["converged"] = *r.converged;
  if (r.expected) {
    j["expected"] = *r.expected;
    j["provenance"] = r.provenance;
    j["tolerance"] = r.tolerance ? *r.tolerance : 0.0;
  }
  if (r.pass) j["pass"] = *r.pass;
  return j;
}

inline std::string to_record_line(const ResultRecord& r) { return to_json(r).dump(); }

inline std::string to_csv_header() {
  return "op,inputs,value,stderr,converged,expected,provenance,tolerance,pass";
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string to_csv_line(const ResultRecord& r) {
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string();
    nlohmann::json j = *v;
    return j.dump();
  };
  std::ostringstream os;
  nlohmann::json v0 = r.values.empty() ? nlohmann::json() : nlohmann::json(r.values.front());
  os << csv_escape(r.op) << ',' << r.inputs << ',' << (r.values.empty() ? "" : v0.dump()) << ','
     << num(r.stderr_) << ',' << (r.converged ? (*r.converged ? "true" : "false") : "") << ','
     << num(r.expected) << ',' << csv_escape(r.provenance) << ',' << num(r.tolerance) << ','
     << (r.pass ? (*r.pass ? "true" : "false") : "");
  return os.str();
}

inline std::string to_table(const std::vector<ResultRecord>& records) {
  std::ostringstream os;
  os << std::left << std::setw(34) << "op" << std::setw(16) << "value" << std::setw(12)
     << "stderr" << std::setw(16) << "expected" << std::setw(8) << "pass"
     << "provenance\n";
  for (const auto& r : records) {
    std::ostringstream val;
    if (!r.values.empty()) val << std::setprecision(10) << r.values.front();
    std::ostringstream se;
    if (r.stderr_) se << std::setprecision(3) << *r.stderr_;
    std::ostringstream exp;
    if (r.expected) exp << std::setprecision(10) << *r.expected;
    os << std::left << std::setw(34) << r.op.substr(0, 33) << std::setw(16) << val.str()
       << std::setw(12) << se.str() << std::setw(16) << exp.str() << std::setw(8)
       << (r.pass ? (*r.pass ? "PASS" : "FAIL") : "") << r.provenance << "\n";
  }
  return os.str();
}

}  // namespace isolink
