#include "nba/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iterator>

#include "nba/error.hpp"
#include "text_util.hpp"

namespace nba {

double ActivityTrace::at(std::int64_t step) const {
  if (samples.empty()) return 0.0;
  auto it = std::lower_bound(samples.begin(), samples.end(), step,
                             [](const ActivitySample& s, std::int64_t v) { return s.step < v; });
  if (it == samples.end()) return samples.back().activity;
  if (it->step != step && it != samples.begin()) return std::prev(it)->activity;
  return it->activity;
}

double aggregate_activity(const Blackboard& bb) {
  return bb.network().total_activation(
      {PopulationKind::Hub, PopulationKind::WorkingMemory, PopulationKind::Control});
}

std::pair<ConnectionPathReport, ActivityTrace> trace_encode(const ControlProgram& program, Blackboard& bb,
                                                            const ExecuteOptions& options) {
  ActivityTrace trace;
  auto observer = [&](const Blackboard& b, std::optional<std::size_t> instruction) {
    const std::int64_t t = b.network().state().time;
    trace.samples.push_back(ActivitySample{t, aggregate_activity(b)});
    if (instruction) trace.markers.push_back(TraceMarker{t, to_string(program.instructions[*instruction])});
  };
  ConnectionPathReport report = execute(program, bb, options, observer);
  for (const auto& s : report.spans) {
    trace.spans.push_back(TraceSpan{s.span.start, s.span.end, s.span.head, s.open_step, s.close_step});
  }
  return {std::move(report), std::move(trace)};
}

PatternReport detect_rise_decline(const ActivityTrace& trace, const TraceSpan& span, const PatternParams& params) {
  if (!span.open_step || !span.close_step) {
    throw Error(ErrorCode::SpanNotClosed,
                "span " + std::to_string(span.start) + ".." + std::to_string(span.end) + " has no close step");
  }
  PatternReport r;
  r.open_activity = trace.at(*span.open_step);
  r.peak_activity = r.open_activity;
  r.peak_step = *span.open_step;
  for (const auto& s : trace.samples) {
    if (s.step < *span.open_step || s.step > *span.close_step) continue;
    if (s.activity > r.peak_activity) {
      r.peak_activity = s.activity;
      r.peak_step = s.step;
    }
  }
  r.after_close_activity = trace.at(*span.close_step + params.delay);
  r.rose = r.peak_activity > r.open_activity + params.epsilon;
  r.declined = r.after_close_activity <= r.peak_activity - params.delta;
  return r;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view s, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "bad number '" + std::string(s) + "'", line);
  }
  return value;
}

nlohmann::json optional_step(const std::optional<std::int64_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<std::int64_t> read_step(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::int64_t>();
}

}  // namespace

std::string export_csv(const ActivityTrace& trace) {
  std::string out = "step,activity\n";
  for (const auto& s : trace.samples) out += std::to_string(s.step) + "," + format_double(s.activity) + "\n";
  return out;
}

ActivityTrace import_csv(std::string_view text) {
  ActivityTrace trace;
  bool header = false;
  for (const auto& [number, line] : detail::split_lines(text)) {
    if (detail::trim(line).empty()) continue;
    if (!header) {
      if (detail::trim(line) != "step,activity") throw Error(ErrorCode::ParseError, "expected step,activity header", number);
      header = true;
      continue;
    }
    auto cols = detail::split(line, ',');
    if (cols.size() != 2) throw Error(ErrorCode::ParseError, "expected 2 columns", number);
    trace.samples.push_back(ActivitySample{parse_number<std::int64_t>(detail::trim(cols[0]), number),
                                           parse_number<double>(detail::trim(cols[1]), number)});
  }
  if (!header) throw Error(ErrorCode::ParseError, "missing step,activity header");
  return trace;
}

nlohmann::json export_json(const ActivityTrace& trace) {
  nlohmann::json j;
  j["samples"] = nlohmann::json::array();
  for (const auto& s : trace.samples) j["samples"].push_back({{"step", s.step}, {"activity", s.activity}});
  j["markers"] = nlohmann::json::array();
  for (const auto& m : trace.markers) j["markers"].push_back({{"step", m.step}, {"instruction", m.instruction}});
  j["spans"] = nlohmann::json::array();
  for (const auto& s : trace.spans) {
    j["spans"].push_back({{"start", s.start},
                          {"end", s.end},
                          {"head", s.head},
                          {"open_step", optional_step(s.open_step)},
                          {"close_step", optional_step(s.close_step)}});
  }
  return j;
}

ActivityTrace import_json(const nlohmann::json& j) {
  try {
    ActivityTrace trace;
    for (const auto& s : j.at("samples")) {
      trace.samples.push_back(ActivitySample{s.at("step").get<std::int64_t>(), s.at("activity").get<double>()});
    }
    for (const auto& m : j.value("markers", nlohmann::json::array())) {
      trace.markers.push_back(TraceMarker{m.at("step").get<std::int64_t>(), m.at("instruction").get<std::string>()});
    }
    for (const auto& s : j.value("spans", nlohmann::json::array())) {
      trace.spans.push_back(TraceSpan{s.at("start").get<int>(), s.at("end").get<int>(), s.at("head").get<int>(),
                                      read_step(s.at("open_step")), read_step(s.at("close_step"))});
    }
    return trace;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("trace json: ") + e.what());
  }
}

}  // namespace nba
