#include "dyson/report.hpp"

namespace dyson {

void RunReport::require(bool ok, const std::string& why) {
  if (ok) return;
  if (reason.empty()) reason = why;
  pass = false;
}

Json RunReport::to_json() const {
  Json j;
  j["schema"] = kReportSchema;
  j["task"] = task;
  j["seed"] = seed;
  j["pass"] = pass;
  if (!reason.empty()) j["reason"] = reason;
  j["params"] = params;
  j["tolerances"] = tolerances;
  j["results"] = results;
  if (wall_time) j["wall_time"] = *wall_time;
  return j;
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace dyson
