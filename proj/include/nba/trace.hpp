#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nba/encoder.hpp"

namespace nba {

struct ActivitySample {
  std::int64_t step = 0;
  double activity = 0.0;
  friend bool operator==(const ActivitySample&, const ActivitySample&) = default;
};

struct TraceMarker {
  std::int64_t step = 0;  // step that executed the instruction
  std::string instruction;
  friend bool operator==(const TraceMarker&, const TraceMarker&) = default;
};

struct TraceSpan {
  int start = 0;
  int end = 0;
  int head = 0;
  std::optional<std::int64_t> open_step;
  std::optional<std::int64_t> close_step;
  friend bool operator==(const TraceSpan&, const TraceSpan&) = default;
};

struct ActivityTrace {
  std::vector<ActivitySample> samples;
  std::vector<TraceMarker> markers;
  std::vector<TraceSpan> spans;

  // Activity at `step`; past the end the last sample is used.
  double at(std::int64_t step) const;
  friend bool operator==(const ActivityTrace&, const ActivityTrace&) = default;
};

// Hub + WM + Control activation; concepts are left out.
double aggregate_activity(const Blackboard& blackboard);

// Same effect on the blackboard as execute(), sampling activity every step.
std::pair<ConnectionPathReport, ActivityTrace> trace_encode(const ControlProgram& program, Blackboard& blackboard,
                                                            const ExecuteOptions& options = {});

struct PatternReport {
  bool rose = false;
  bool declined = false;
  double open_activity = 0.0;
  double peak_activity = 0.0;
  std::int64_t peak_step = 0;
  double after_close_activity = 0.0;
};

struct PatternParams {
  int delay = 2;
  double epsilon = 1e-6;
  double delta = 1e-6;
};

// rose: peak within [open, close] exceeds the activity at open by epsilon.
// declined: activity `delay` steps after close is at least delta below the peak.
// Throws SpanNotClosed.
PatternReport detect_rise_decline(const ActivityTrace& trace, const TraceSpan& span, const PatternParams& params = {});

std::string export_csv(const ActivityTrace& trace);
nlohmann::json export_json(const ActivityTrace& trace);
// CSV carries samples only. Both throw ParseError on malformed input.
ActivityTrace import_csv(std::string_view text);
ActivityTrace import_json(const nlohmann::json& j);

}  // namespace nba
