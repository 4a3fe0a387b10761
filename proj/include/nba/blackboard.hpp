#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nba/dynamics.hpp"
#include "nba/lexicon.hpp"

namespace nba {

enum class PoolKind : std::uint8_t { N, V, C };

std::string_view to_string(PoolKind pool);

struct HubRef {
  PoolKind pool = PoolKind::N;
  int index = 0;
  friend auto operator<=>(const HubRef&, const HubRef&) = default;
};

// "N0", "V3", "C1".
std::string to_string(HubRef hub);
std::optional<HubRef> parse_hub(std::string_view text);

// Hub pool a word of this type binds to; adjectives share the N pool.
std::optional<PoolKind> pool_for(WordType type);

enum class RelationKind { Agent, Theme, Modifier, Prep, Clause };

struct RelationShape {
  RelationKind kind;
  // Pool pairs that get matrix cells for this relation.
  std::vector<std::pair<PoolKind, PoolKind>> legs;
  // Hub-to-hub hops between the two related words.
  int path_length = 1;
};

// agent, theme, modifier, clause, prep:<word>; nullopt otherwise.
std::optional<RelationShape> relation_shape(std::string_view relation);
// Query-level aliases ("do" is the N->V agent gate).
std::string canonical_relation(std::string_view relation);
std::vector<std::string> default_relations();

struct BlackboardConfig {
  int k_n = 8;
  int k_v = 8;
  int k_c = 4;
  std::vector<std::string> relations = default_relations();
  DynamicsParams dynamics;
  double gain = 1.0;
  double sustain_threshold = 0.5;

  // Throws InvalidConfig.
  void validate() const;
  int capacity(PoolKind pool) const;
  friend bool operator==(const BlackboardConfig&, const BlackboardConfig&) = default;
};

nlohmann::json to_json(const BlackboardConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
BlackboardConfig blackboard_config_from_json(const nlohmann::json& j);

struct BindingId {
  std::uint32_t value = 0;
  friend auto operator<=>(const BindingId&, const BindingId&) = default;
};

enum class BindingKind { Concept, Cell };

struct Binding {
  BindingId id;
  BindingKind kind = BindingKind::Concept;
  std::string word;      // concept bindings
  HubRef hub;            // concept: the bound hub; cell: the source hub
  HubRef to;             // cell only
  std::string relation;  // cell only
  PopulationId wm;
  bool released = false;
};

struct MatrixCell {
  HubRef from;
  HubRef to;
  std::string relation;
  PopulationId wm;
  std::string control_label;
  ConnectionId forward;
  ConnectionId mirror;
};

enum class HubStatus { Free, Reserved, Bound };

struct HubState {
  HubRef hub;
  PopulationId population;
  HubStatus status = HubStatus::Free;
  std::string word;  // set while a concept is bound
};

// Hub pools, the relation-labelled connection matrix and the WM bindings
// that make up temporary connection paths. The population/connection
// structure is fixed once built; binding and release only move WM and
// control state. Adding words grows the lexicon side only.
class Blackboard {
 public:
  explicit Blackboard(BlackboardConfig config = {}, const LexiconFile& lexicon = {});

  Blackboard(const Blackboard&) = delete;
  Blackboard& operator=(const Blackboard&) = delete;
  Blackboard(Blackboard&&) = default;
  Blackboard& operator=(Blackboard&&) = default;

  // Adds a concept and wires it to every hub of its pool.
  const LexicalEntry& add_word(std::string_view word, WordType type);
  void add_semantic_relation(std::string_view subject, std::string_view label, std::string_view object);

  // Lowest-index free hub, marked reserved until a concept binds to it.
  HubRef allocate_hub(PoolKind pool);
  // Returns a reserved, unbound hub to the free list.
  void free_hub(HubRef hub);
  BindingId bind_concept(std::string_view word, HubRef hub);
  BindingId bind_hubs(HubRef from, HubRef to, std::string_view relation);

  // Idempotent.
  void release(BindingId binding);
  void release(std::span<const BindingId> bindings);
  void release_all();

  bool is_active(BindingId binding) const;
  const Binding& binding(BindingId binding) const;
  std::span<const Binding> bindings() const { return bindings_; }
  std::vector<BindingId> active_bindings() const;

  // Gated concept<->hub connections plus matrix cell connections.
  std::size_t connection_count() const;
  std::size_t concept_hub_connection_count() const { return links_.size() * 2; }
  std::size_t matrix_connection_count() const { return cells_.size() * 2; }

  const MatrixCell* find_cell(HubRef from, HubRef to, std::string_view relation) const;
  std::span<const MatrixCell> cells() const { return cells_; }
  const HubState& hub(HubRef hub) const;
  std::vector<HubState> hubs() const { return hubs_; }
  // WM population gating the word<->hub connection pair.
  std::optional<PopulationId> link_wm(std::string_view word, HubRef hub) const;

  bool has_relation(std::string_view relation) const;
  int longest_path() const;

  const BlackboardConfig& config() const { return config_; }
  const Network& network() const { return network_; }
  Network& network() { return network_; }
  const Lexicon& lexicon() const { return lexicon_; }

  // Everything bind/release can change, for transactional execution.
  struct Checkpoint {
    NetworkState state;
    std::size_t binding_count = 0;
    std::vector<HubState> hubs;
    std::vector<int> cell_refs;
    std::size_t population_count = 0;
  };
  Checkpoint checkpoint() const;
  void rollback(const Checkpoint& checkpoint);

  nlohmann::json snapshot() const;
  static Blackboard restore(const nlohmann::json& snapshot);

 private:
  struct Link {
    PopulationId wm;
    ConnectionId forward;
    ConnectionId reverse;
  };

  std::size_t global_index(HubRef hub) const;
  void check_hub(HubRef hub) const;
  void wire_word(const LexicalEntry& entry);
  static std::uint64_t link_key(PopulationId concept_id, std::size_t hub);
  std::uint64_t cell_key(std::size_t relation, HubRef from, HubRef to) const;
  std::size_t relation_index(std::string_view canonical) const;

  BlackboardConfig config_;
  Network network_;
  Lexicon lexicon_;
  std::vector<HubState> hubs_;
  std::vector<int> cell_refs_;  // active cell bindings touching each hub
  std::vector<MatrixCell> cells_;
  std::unordered_map<std::uint64_t, std::size_t> cell_index_;
  std::unordered_map<std::uint64_t, Link> links_;
  std::vector<Binding> bindings_;
};

}  // namespace nba
