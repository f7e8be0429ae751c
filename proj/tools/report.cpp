#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace ergobound::cli {

Json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void Report::warn(const std::string& w) {
  for (const auto& e : warnings)
    if (e == w) return;
  warnings.push_back(w);
}

void Report::warn_all(const std::vector<std::string>& ws) {
  for (const auto& w : ws) warn(w);
}

Json Report::to_json() const {
  Json j;
  j["inputs"] = inputs;
  j["results"] = results;
  j["warnings"] = warnings;
  j["provenance"] = provenance;
  j["timing"] = {{"wall_ms", wall_ms ? num(*wall_ms) : Json(nullptr)}};
  return j;
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix + "/" + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "/" + std::to_string(i), out);
  } else {
    std::string val;
    if (j.is_string()) val = j.get<std::string>();
    else if (j.is_number_float()) val = csv_num(j.get<double>());
    else if (!j.is_null()) val = j.dump();
    out += csv_escape(prefix) + "," + csv_escape(val) + "\n";
  }
}

}  // namespace

std::string Report::to_csv() const {
  std::string out = "key,value\n";
  flatten(results, "", out);
  return out;
}

void emit(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + *path);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + *path);
}

}  // namespace ergobound::cli
