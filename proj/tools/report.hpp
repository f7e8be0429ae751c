#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ergobound::cli {

using Json = nlohmann::ordered_json;

// Number rounded to 12 significant digits; infinities become the string "inf".
Json num(double v);
std::string csv_num(double v);

struct Report {
  Json inputs = Json::object();
  Json results = Json::object();
  Json warnings = Json::array();
  Json provenance = Json::array();
  std::optional<double> wall_ms;

  void warn(const std::string& w);
  void warn_all(const std::vector<std::string>& ws);
  Json to_json() const;
  // key,value rows for every scalar leaf of `results`, keyed by JSON pointer.
  std::string to_csv() const;
};

std::string csv_escape(const std::string& s);

// Writes text to stdout, or to `path` when given. Throws std::runtime_error on I/O failure.
void emit(const std::string& text, const std::optional<std::string>& path);

}  // namespace ergobound::cli
