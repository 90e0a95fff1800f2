#pragma once

// Machine-readable run reports shared by the command-line tool and the
// acceptance suite.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace dyson {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

struct RunReport {
  std::string task;
  Json params = Json::object();
  Json results = Json::object();
  Json tolerances = Json::object();
  bool pass = false;
  std::uint64_t seed = 0;
  std::string reason;                // why pass is false, empty otherwise
  std::optional<double> wall_time;   // only filled when timing is requested

  /// Fails the report with `why` unless `ok`; the first reason is kept.
  void require(bool ok, const std::string& why);

  Json to_json() const;
  std::string dump() const;  // two-space indented, trailing newline
};

}  // namespace dyson
