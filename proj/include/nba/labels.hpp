#pragma once

#include <string>
#include <string_view>

// Control-label namespaces. Episodic (blackboard) and semantic gates never
// share a label, so asserting one family leaves the other closed.
namespace nba::labels {

inline constexpr std::string_view kReadout = "route:out";

inline std::string episodic(std::string_view relation, bool reverse = false) {
  std::string out = "bb:";
  out += relation;
  if (reverse) out += ":rev";
  return out;
}

inline std::string semantic(std::string_view relation, bool reverse = false) {
  std::string out = "sem:";
  out += relation;
  if (reverse) out += ":rev";
  return out;
}

}  // namespace nba::labels
