#include "nba/config.hpp"

#include <set>

#include "nba/error.hpp"

namespace nba {

QueryOptions Config::query_options() const { return QueryOptions{readout_threshold, settle_budget}; }

ExecuteOptions Config::execute_options() const {
  ExecuteOptions o;
  o.auto_add_words = auto_add_words;
  return o;
}

CompileOptions Config::compile_options(const Blackboard& blackboard) const {
  CompileOptions o = compile_options_for(blackboard, strict_labels);
  o.auto_add_words = auto_add_words;
  return o;
}

Config config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> own{"readout_threshold", "settle_budget", "word_policy", "strict_labels",
                                         "label_map"};
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  Config c;
  nlohmann::json board = nlohmann::json::object();
  try {
    for (const auto& [key, value] : j.items()) {
      if (!own.contains(key)) board[key] = value;
    }
    c.board = blackboard_config_from_json(board);

    if (j.contains("readout_threshold")) c.readout_threshold = j["readout_threshold"].get<double>();
    if (!(c.readout_threshold > 0.0 && c.readout_threshold <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "readout_threshold must lie in (0,1]");
    }
    if (j.contains("settle_budget") && !j["settle_budget"].is_null()) {
      c.settle_budget = j["settle_budget"].get<int>();
      if (*c.settle_budget < 1) throw Error(ErrorCode::InvalidConfig, "settle_budget must be >= 1");
    }
    if (j.contains("word_policy")) {
      const auto policy = j["word_policy"].get<std::string>();
      if (policy != "auto-add" && policy != "strict") {
        throw Error(ErrorCode::InvalidConfig, "word_policy must be auto-add or strict");
      }
      c.auto_add_words = policy == "auto-add";
    }
    if (j.contains("strict_labels")) c.strict_labels = j["strict_labels"].get<bool>();
    if (j.contains("label_map")) {
      for (const auto& [label, rule] : j["label_map"].items()) {
        c.label_map[label] = rule_from_name(rule.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

Config load_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return config_from_json(j);
}

nlohmann::json to_json(const Config& c) {
  nlohmann::json j = to_json(c.board);
  j["readout_threshold"] = c.readout_threshold;
  j["settle_budget"] = c.settle_budget ? nlohmann::json(*c.settle_budget) : nlohmann::json(nullptr);
  j["word_policy"] = c.auto_add_words ? "auto-add" : "strict";
  j["strict_labels"] = c.strict_labels;
  j["label_map"] = nlohmann::json::object();
  for (const auto& [label, rule] : c.label_map) j["label_map"][label] = rule_name(rule);
  return j;
}

}  // namespace nba
