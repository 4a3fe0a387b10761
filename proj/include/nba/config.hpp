#pragma once

#include <optional>
#include <string_view>

#include <json.hpp>

#include "nba/blackboard.hpp"
#include "nba/encoder.hpp"
#include "nba/query.hpp"

namespace nba {

// Run-time settings for the command line tools. Every key is optional:
//   k_N k_V k_C relations gain sustain_threshold decay wm_decay
//   wm_decay_horizon readout_threshold settle_budget
//   word_policy ("auto-add" | "strict") strict_labels label_map
struct Config {
  BlackboardConfig board;
  double readout_threshold = 0.5;
  std::optional<int> settle_budget;
  bool auto_add_words = true;
  bool strict_labels = true;
  // Default map with the label_map overrides applied.
  RelationMap label_map = default_relation_map();

  QueryOptions query_options() const;
  ExecuteOptions execute_options() const;
  CompileOptions compile_options(const Blackboard& blackboard) const;
};

// Throws InvalidConfig on unknown keys or out-of-range values.
Config config_from_json(const nlohmann::json& j);
Config load_config(std::string_view text);
nlohmann::json to_json(const Config& config);

}  // namespace nba
