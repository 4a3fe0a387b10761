#pragma once

#include <compare>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace nba {

enum class PopulationKind : std::uint8_t { Concept, Hub, WorkingMemory, Control };

std::string_view to_string(PopulationKind kind);

struct PopulationId {
  std::uint32_t value = 0;
  friend auto operator<=>(const PopulationId&, const PopulationId&) = default;
};

struct ConnectionId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ConnectionId&, const ConnectionId&) = default;
};

// A connection transmits only while every condition it carries holds:
// the control label is asserted and/or the binding WM is at or above its
// sustain threshold. A gate with neither condition is always open.
struct Gate {
  std::optional<std::string> control;
  std::optional<PopulationId> binding;

  static Gate control_gate(std::string label) { return Gate{std::move(label), std::nullopt}; }
  static Gate binding_gate(PopulationId wm) { return Gate{std::nullopt, wm}; }
  static Gate dual(PopulationId wm, std::string label) { return Gate{std::move(label), wm}; }
};

struct Population {
  PopulationId id;
  PopulationKind kind = PopulationKind::Concept;
  double sustain_threshold = 0.5;
  // Control populations follow this label: driven to 1 while asserted.
  std::string control_label;
};

struct GatedConnection {
  ConnectionId id;
  PopulationId source;
  PopulationId target;
  Gate gate;
  double gain = 1.0;
};

struct DynamicsParams {
  // Fraction of the current activation carried into the next step.
  double concept_decay = 0.0;
  double hub_decay = 0.0;
  double control_decay = 0.0;
  double wm_decay = 0.0;
  // Steps a WM stays sustained before it releases itself; 0 = until released.
  std::int64_t wm_hold_steps = 0;

  double decay_for(PopulationKind kind) const;
  friend bool operator==(const DynamicsParams&, const DynamicsParams&) = default;
};

// Everything that changes while the structure stays fixed. Copying a state
// and advancing the copy never touches the network it came from.
struct NetworkState {
  std::vector<double> activation;
  std::vector<std::uint8_t> sustained;
  std::vector<std::int64_t> sustained_since;
  std::vector<std::uint8_t> controls;  // indexed by interned label id
  std::int64_t time = 0;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

class Network {
 public:
  explicit Network(DynamicsParams params = {});

  PopulationId add_population(PopulationKind kind, double sustain_threshold = 0.5);
  // A Control population whose activation tracks the assertion of `label`.
  PopulationId add_control_population(std::string_view label);
  ConnectionId add_gated_connection(PopulationId source, PopulationId target, const Gate& gate,
                                    double gain = 1.0);

  void set_control(std::string_view label, bool on);
  bool control_asserted(std::string_view label) const;
  std::vector<std::string> asserted_controls() const;
  void clear_controls();

  // activation := max(activation, level); level must lie in [0,1].
  void inject(PopulationId population, double level);
  // Drops a WM (or any population) to zero and clears its sustain latch.
  void release(PopulationId population);
  void step();

  double activation(PopulationId population) const;
  bool sustained(PopulationId population) const;
  bool gate_open(ConnectionId connection) const;

  // State-parameterised forms used for private query copies.
  void advance(NetworkState& state) const;
  void inject(NetworkState& state, PopulationId population, double level) const;
  void set_control(NetworkState& state, std::string_view label, bool on) const;
  bool gate_open(const GatedConnection& connection, const NetworkState& state) const;

  const NetworkState& state() const { return state_; }
  // Replaces the dynamic state; sizes must match this network's structure.
  void set_state(NetworkState state);

  const DynamicsParams& params() const { return params_; }
  std::size_t population_count() const { return populations_.size(); }
  std::size_t connection_count() const { return connections_.size(); }
  const Population& population(PopulationId id) const;
  std::span<const Population> populations() const { return populations_; }
  std::span<const GatedConnection> connections() const { return connections_; }
  std::span<const ConnectionId> outgoing(PopulationId id) const;
  // Interned control labels; NetworkState::controls is indexed by position.
  const std::vector<std::string>& labels() const { return labels_; }

  // Sum of activation over populations of the given kinds.
  double total_activation(std::initializer_list<PopulationKind> kinds) const;

 private:
  struct CompiledGate {
    std::int32_t label = -1;
    std::int64_t binding = -1;
  };

  void check(PopulationId id) const;
  std::int32_t intern(std::string_view label);
  std::int32_t find_label(std::string_view label) const;
  bool open(const CompiledGate& gate, const NetworkState& state) const;

  DynamicsParams params_;
  std::vector<Population> populations_;
  std::vector<GatedConnection> connections_;
  std::vector<CompiledGate> compiled_;
  std::vector<std::vector<ConnectionId>> outgoing_;
  std::vector<std::int32_t> control_label_of_;  // per population, -1 if none
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::int32_t> label_ids_;
  NetworkState state_;
};

nlohmann::json to_json(const NetworkState& state, const Network& network);
// Reads a state written by to_json; validates it against `network`.
NetworkState network_state_from_json(const nlohmann::json& j, const Network& network);

}  // namespace nba
