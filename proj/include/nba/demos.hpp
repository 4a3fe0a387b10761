#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nba/blackboard.hpp"
#include "nba/trace.hpp"

namespace nba {

struct DemoQuery {
  std::string text;
  std::vector<std::string> expected;
  std::vector<std::string> actual;
  bool ok() const { return expected == actual; }
};

struct DemoPattern {
  std::string phrase;
  TraceSpan span;
  PatternReport report;
  bool ok() const { return report.rose && report.declined; }
};

struct DemoResult {
  std::string name;
  std::string description;
  std::unique_ptr<Blackboard> board;
  std::vector<DemoQuery> queries;
  std::vector<DemoPattern> patterns;
  std::vector<ActivityTrace> traces;

  bool passed() const;
};

// fig1a fig1b fig1d fig1e fig1f reporter nelson
const std::vector<std::string>& demo_names();
// Throws InvalidArgument for an unknown name.
DemoResult run_demo(std::string_view name);
// The demo's queries answered by another blackboard (e.g. a restored one).
std::vector<DemoQuery> rerun_queries(const DemoResult& demo, const Blackboard& board);

}  // namespace nba
