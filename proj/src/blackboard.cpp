#include "nba/blackboard.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "nba/error.hpp"
#include "nba/labels.hpp"

namespace nba {

std::string_view to_string(PoolKind pool) {
  switch (pool) {
    case PoolKind::N: return "N";
    case PoolKind::V: return "V";
    case PoolKind::C: return "C";
  }
  return "?";
}

std::string to_string(HubRef hub) { return std::string(to_string(hub.pool)) + std::to_string(hub.index); }

std::optional<HubRef> parse_hub(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  HubRef hub;
  switch (text.front()) {
    case 'N': hub.pool = PoolKind::N; break;
    case 'V': hub.pool = PoolKind::V; break;
    case 'C': hub.pool = PoolKind::C; break;
    default: return std::nullopt;
  }
  auto digits = text.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), hub.index);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || hub.index < 0) return std::nullopt;
  return hub;
}

std::optional<PoolKind> pool_for(WordType type) {
  switch (type) {
    case WordType::Noun:
    case WordType::Adjective: return PoolKind::N;
    case WordType::Verb: return PoolKind::V;
    default: return std::nullopt;
  }
}

std::optional<RelationShape> relation_shape(std::string_view relation) {
  using P = PoolKind;
  if (relation == "agent") return RelationShape{RelationKind::Agent, {{P::N, P::V}}, 1};
  if (relation == "theme") return RelationShape{RelationKind::Theme, {{P::V, P::N}}, 1};
  if (relation == "modifier") return RelationShape{RelationKind::Modifier, {{P::N, P::N}}, 1};
  if (relation == "clause") {
    return RelationShape{RelationKind::Clause, {{P::N, P::C}, {P::V, P::C}, {P::C, P::V}}, 2};
  }
  if (relation.starts_with("prep:") && relation.size() > 5) {
    return RelationShape{RelationKind::Prep, {{P::N, P::N}}, 1};
  }
  return std::nullopt;
}

std::string canonical_relation(std::string_view relation) {
  if (relation == "do") return "agent";
  return std::string(relation);
}

std::vector<std::string> default_relations() {
  std::vector<std::string> out{"agent", "theme", "modifier", "clause"};
  for (const char* p : {"of", "in", "on", "at", "with", "to", "from", "by", "for", "about", "under", "over"}) {
    out.push_back(std::string("prep:") + p);
  }
  return out;
}

void BlackboardConfig::validate() const {
  if (k_n < 1 || k_v < 1 || k_c < 1) throw Error(ErrorCode::InvalidConfig, "pool capacities must be >= 1");
  std::set<std::string> seen;
  for (const auto& r : relations) {
    if (!relation_shape(r)) throw Error(ErrorCode::InvalidConfig, "unknown relation '" + r + "'");
    if (!seen.insert(r).second) throw Error(ErrorCode::InvalidConfig, "duplicate relation '" + r + "'");
  }
  if (!(gain > 0.0)) throw Error(ErrorCode::InvalidConfig, "gain must be > 0");
  if (!(sustain_threshold >= 0.0 && sustain_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "sustain_threshold must lie in [0,1]");
  }
  for (double d : {dynamics.concept_decay, dynamics.hub_decay, dynamics.control_decay, dynamics.wm_decay}) {
    if (!(d >= 0.0 && d <= 1.0)) throw Error(ErrorCode::InvalidConfig, "decay must lie in [0,1]");
  }
  if (dynamics.wm_hold_steps < 0) throw Error(ErrorCode::InvalidConfig, "wm_decay_horizon must be >= 0");
}

int BlackboardConfig::capacity(PoolKind pool) const {
  switch (pool) {
    case PoolKind::N: return k_n;
    case PoolKind::V: return k_v;
    case PoolKind::C: return k_c;
  }
  return 0;
}

nlohmann::json to_json(const BlackboardConfig& c) {
  nlohmann::json j;
  j["k_N"] = c.k_n;
  j["k_V"] = c.k_v;
  j["k_C"] = c.k_c;
  j["relations"] = c.relations;
  j["gain"] = c.gain;
  j["sustain_threshold"] = c.sustain_threshold;
  const auto& d = c.dynamics;
  if (d.concept_decay == d.hub_decay && d.hub_decay == d.control_decay) {
    j["decay"] = d.concept_decay;
  } else {
    j["decay"] = {{"concept", d.concept_decay}, {"hub", d.hub_decay}, {"control", d.control_decay}};
  }
  j["wm_decay"] = d.wm_decay;
  if (d.wm_hold_steps > 0) {
    j["wm_decay_horizon"] = d.wm_hold_steps;
  } else {
    j["wm_decay_horizon"] = nullptr;
  }
  return j;
}

BlackboardConfig blackboard_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"k_N", "k_V", "k_C", "relations", "gain", "sustain_threshold",
                                           "decay", "wm_decay", "wm_decay_horizon"};
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  BlackboardConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
    if (j.contains("k_N")) c.k_n = j["k_N"].get<int>();
    if (j.contains("k_V")) c.k_v = j["k_V"].get<int>();
    if (j.contains("k_C")) c.k_c = j["k_C"].get<int>();
    if (j.contains("relations")) c.relations = j["relations"].get<std::vector<std::string>>();
    if (j.contains("gain")) c.gain = j["gain"].get<double>();
    if (j.contains("sustain_threshold")) c.sustain_threshold = j["sustain_threshold"].get<double>();
    if (j.contains("decay")) {
      const auto& d = j["decay"];
      if (d.is_object()) {
        c.dynamics.concept_decay = d.value("concept", 0.0);
        c.dynamics.hub_decay = d.value("hub", 0.0);
        c.dynamics.control_decay = d.value("control", 0.0);
      } else {
        c.dynamics.concept_decay = c.dynamics.hub_decay = c.dynamics.control_decay = d.get<double>();
      }
    }
    if (j.contains("wm_decay")) c.dynamics.wm_decay = j["wm_decay"].get<double>();
    if (j.contains("wm_decay_horizon") && !j["wm_decay_horizon"].is_null()) {
      c.dynamics.wm_hold_steps = j["wm_decay_horizon"].get<std::int64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------

Blackboard::Blackboard(BlackboardConfig config, const LexiconFile& lexicon)
    : config_((config.validate(), std::move(config))), network_(config_.dynamics) {
  for (const auto& r : config_.relations) {
    network_.add_control_population(labels::episodic(r));
    network_.add_control_population(labels::episodic(r, true));
  }
  network_.add_control_population(labels::kReadout);

  for (PoolKind pool : {PoolKind::N, PoolKind::V, PoolKind::C}) {
    for (int i = 0; i < config_.capacity(pool); ++i) {
      HubRef ref{pool, i};
      hubs_.push_back(HubState{ref, network_.add_population(PopulationKind::Hub), HubStatus::Free, {}});
    }
  }
  cell_refs_.assign(hubs_.size(), 0);

  for (std::size_t r = 0; r < config_.relations.size(); ++r) {
    const std::string& name = config_.relations[r];
    const RelationShape shape = *relation_shape(name);
    const std::string forward = labels::episodic(name);
    const std::string mirror = labels::episodic(name, true);
    for (auto [from_pool, to_pool] : shape.legs) {
      for (int i = 0; i < config_.capacity(from_pool); ++i) {
        for (int k = 0; k < config_.capacity(to_pool); ++k) {
          HubRef from{from_pool, i};
          HubRef to{to_pool, k};
          PopulationId wm = network_.add_population(PopulationKind::WorkingMemory, config_.sustain_threshold);
          PopulationId a = hubs_[global_index(from)].population;
          PopulationId b = hubs_[global_index(to)].population;
          MatrixCell cell{from, to, name, wm, forward,
                          network_.add_gated_connection(a, b, Gate::dual(wm, forward), config_.gain),
                          network_.add_gated_connection(b, a, Gate::dual(wm, mirror), config_.gain)};
          cell_index_.emplace(cell_key(r, from, to), cells_.size());
          cells_.push_back(std::move(cell));
        }
      }
    }
  }

  for (const auto& w : lexicon.words) add_word(w.word, w.type);
  for (const auto& rel : lexicon.relations) add_semantic_relation(rel.subject, rel.label, rel.object);
}

std::size_t Blackboard::global_index(HubRef hub) const {
  switch (hub.pool) {
    case PoolKind::N: return static_cast<std::size_t>(hub.index);
    case PoolKind::V: return static_cast<std::size_t>(config_.k_n + hub.index);
    case PoolKind::C: return static_cast<std::size_t>(config_.k_n + config_.k_v + hub.index);
  }
  return 0;
}

void Blackboard::check_hub(HubRef hub) const {
  if (hub.index < 0 || hub.index >= config_.capacity(hub.pool)) {
    throw Error(ErrorCode::InvalidArgument, "no hub " + to_string(hub));
  }
}

std::uint64_t Blackboard::link_key(PopulationId concept_id, std::size_t hub) {
  return (static_cast<std::uint64_t>(concept_id.value) << 20) | hub;
}

std::uint64_t Blackboard::cell_key(std::size_t relation, HubRef from, HubRef to) const {
  return (static_cast<std::uint64_t>(relation) << 40) | (static_cast<std::uint64_t>(global_index(from)) << 20) |
         global_index(to);
}

std::size_t Blackboard::relation_index(std::string_view canonical) const {
  auto it = std::find(config_.relations.begin(), config_.relations.end(), canonical);
  return it == config_.relations.end() ? config_.relations.size()
                                       : static_cast<std::size_t>(it - config_.relations.begin());
}

bool Blackboard::has_relation(std::string_view relation) const {
  return relation_index(canonical_relation(relation)) < config_.relations.size();
}

int Blackboard::longest_path() const {
  int longest = 1;
  for (const auto& r : config_.relations) longest = std::max(longest, relation_shape(r)->path_length);
  return longest;
}

void Blackboard::wire_word(const LexicalEntry& entry) {
  auto pool = pool_for(entry.type);
  if (!pool) return;
  const std::string readout(labels::kReadout);
  for (int i = 0; i < config_.capacity(*pool); ++i) {
    const std::size_t g = global_index(HubRef{*pool, i});
    const PopulationId hub = hubs_[g].population;
    PopulationId wm = network_.add_population(PopulationKind::WorkingMemory, config_.sustain_threshold);
    Link link{wm, network_.add_gated_connection(entry.concept_id, hub, Gate::binding_gate(wm), config_.gain),
              network_.add_gated_connection(hub, entry.concept_id, Gate::dual(wm, readout), config_.gain)};
    links_.emplace(link_key(entry.concept_id, g), link);
  }
}

const LexicalEntry& Blackboard::add_word(std::string_view word, WordType type) {
  const LexicalEntry& entry = lexicon_.add_word(network_, word, type);
  wire_word(entry);
  return entry;
}

void Blackboard::add_semantic_relation(std::string_view subject, std::string_view label, std::string_view object) {
  lexicon_.add_semantic_relation(network_, subject, label, object);
}

HubRef Blackboard::allocate_hub(PoolKind pool) {
  for (auto& h : hubs_) {
    if (h.hub.pool == pool && h.status == HubStatus::Free) {
      h.status = HubStatus::Reserved;
      return h.hub;
    }
  }
  throw Error(ErrorCode::PoolExhausted, std::string("no free ") + std::string(to_string(pool)) + " hub");
}

void Blackboard::free_hub(HubRef hub) {
  check_hub(hub);
  HubState& h = hubs_[global_index(hub)];
  if (h.status == HubStatus::Reserved && cell_refs_[global_index(hub)] == 0) h.status = HubStatus::Free;
}

const HubState& Blackboard::hub(HubRef hub) const {
  check_hub(hub);
  return hubs_[global_index(hub)];
}

std::optional<PopulationId> Blackboard::link_wm(std::string_view word, HubRef hub) const {
  const LexicalEntry* e = lexicon_.find(word);
  if (!e || hub.index < 0 || hub.index >= config_.capacity(hub.pool)) return std::nullopt;
  auto it = links_.find(link_key(e->concept_id, global_index(hub)));
  if (it == links_.end()) return std::nullopt;
  return it->second.wm;
}

BindingId Blackboard::bind_concept(std::string_view word, HubRef hub) {
  const LexicalEntry& e = lexicon_.entry(word);
  check_hub(hub);
  auto pool = pool_for(e.type);
  if (!pool || *pool != hub.pool) {
    throw Error(ErrorCode::TypeMismatch, "'" + e.word + "' (" + std::string(tag(e.type)) +
                                             ") cannot bind to hub " + to_string(hub));
  }
  HubState& h = hubs_[global_index(hub)];
  if (h.status == HubStatus::Bound) {
    throw Error(ErrorCode::HubBusy, "hub " + to_string(hub) + " already holds '" + h.word + "'");
  }
  const Link& link = links_.at(link_key(e.concept_id, global_index(hub)));
  network_.inject(link.wm, 1.0);
  h.status = HubStatus::Bound;
  h.word = e.word;

  BindingId id{static_cast<std::uint32_t>(bindings_.size())};
  bindings_.push_back(Binding{id, BindingKind::Concept, e.word, hub, hub, {}, link.wm, false});
  return id;
}

const MatrixCell* Blackboard::find_cell(HubRef from, HubRef to, std::string_view relation) const {
  const std::size_t r = relation_index(canonical_relation(relation));
  if (r >= config_.relations.size()) return nullptr;
  if (from.index < 0 || from.index >= config_.capacity(from.pool)) return nullptr;
  if (to.index < 0 || to.index >= config_.capacity(to.pool)) return nullptr;
  auto it = cell_index_.find(cell_key(r, from, to));
  return it == cell_index_.end() ? nullptr : &cells_[it->second];
}

BindingId Blackboard::bind_hubs(HubRef from, HubRef to, std::string_view relation) {
  const MatrixCell* cell = find_cell(from, to, relation);
  if (!cell) {
    throw Error(ErrorCode::NoSuchCell,
                "no " + std::string(relation) + " cell " + to_string(from) + " -> " + to_string(to));
  }
  if (network_.activation(cell->wm) >= network_.population(cell->wm).sustain_threshold) {
    throw Error(ErrorCode::CellBusy,
                cell->relation + " cell " + to_string(from) + " -> " + to_string(to) + " is already bound");
  }
  network_.inject(cell->wm, 1.0);
  ++cell_refs_[global_index(from)];
  ++cell_refs_[global_index(to)];
  for (HubRef h : {from, to}) {
    HubState& s = hubs_[global_index(h)];
    if (h.pool == PoolKind::C && s.status != HubStatus::Bound) s.status = HubStatus::Bound;
  }

  BindingId id{static_cast<std::uint32_t>(bindings_.size())};
  bindings_.push_back(Binding{id, BindingKind::Cell, {}, from, to, cell->relation, cell->wm, false});
  return id;
}

void Blackboard::release(BindingId id) {
  if (id.value >= bindings_.size()) throw Error(ErrorCode::InvalidArgument, "no such binding");
  Binding& b = bindings_[id.value];
  if (b.released) return;
  b.released = true;
  network_.release(b.wm);
  if (b.kind == BindingKind::Concept) {
    HubState& h = hubs_[global_index(b.hub)];
    h.status = HubStatus::Free;
    h.word.clear();
    return;
  }
  for (HubRef hub : {b.hub, b.to}) {
    const std::size_t g = global_index(hub);
    --cell_refs_[g];
    if (hub.pool == PoolKind::C && cell_refs_[g] == 0) hubs_[g].status = HubStatus::Free;
  }
}

void Blackboard::release(std::span<const BindingId> ids) {
  for (BindingId id : ids) release(id);
}

void Blackboard::release_all() {
  for (const Binding& b : bindings_) release(b.id);
  for (HubState& h : hubs_) {
    h.status = HubStatus::Free;
    h.word.clear();
  }
}

bool Blackboard::is_active(BindingId id) const {
  const Binding& b = binding(id);
  return !b.released && network_.activation(b.wm) >= network_.population(b.wm).sustain_threshold;
}

const Binding& Blackboard::binding(BindingId id) const {
  if (id.value >= bindings_.size()) throw Error(ErrorCode::InvalidArgument, "no such binding");
  return bindings_[id.value];
}

std::vector<BindingId> Blackboard::active_bindings() const {
  std::vector<BindingId> out;
  for (const Binding& b : bindings_) {
    if (is_active(b.id)) out.push_back(b.id);
  }
  return out;
}

std::size_t Blackboard::connection_count() const {
  return concept_hub_connection_count() + matrix_connection_count();
}

Blackboard::Checkpoint Blackboard::checkpoint() const {
  return Checkpoint{network_.state(), bindings_.size(), hubs_, cell_refs_, network_.population_count()};
}

void Blackboard::rollback(const Checkpoint& cp) {
  if (cp.population_count != network_.population_count()) {
    throw Error(ErrorCode::InvalidArgument, "checkpoint predates a structural change");
  }
  network_.set_state(cp.state);
  bindings_.resize(cp.binding_count);
  hubs_ = cp.hubs;
  cell_refs_ = cp.cell_refs;
}

// ---------------------------------------------------------------------------
// Snapshot: structure is rebuilt from config + lexicon, then bindings are
// replayed and the dynamic state is restored verbatim.

namespace {

std::string_view status_name(HubStatus s) {
  switch (s) {
    case HubStatus::Free: return "free";
    case HubStatus::Reserved: return "reserved";
    case HubStatus::Bound: return "bound";
  }
  return "free";
}

HubRef hub_field(const nlohmann::json& j, const char* key) {
  auto hub = parse_hub(j.at(key).get<std::string>());
  if (!hub) throw Error(ErrorCode::StateFormat, std::string("bad hub in field '") + key + "'");
  return *hub;
}

}  // namespace

nlohmann::json Blackboard::snapshot() const {
  nlohmann::json j;
  j["format"] = "nba-blackboard";
  j["version"] = 1;
  j["config"] = to_json(config_);

  nlohmann::json words = nlohmann::json::array();
  for (const auto& e : lexicon_.entries()) words.push_back({{"word", e.word}, {"type", tag(e.type)}});
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : lexicon_.relations()) {
    relations.push_back({{"subject", r.subject}, {"label", r.label}, {"object", r.object}});
  }
  j["lexicon"] = {{"words", words}, {"relations", relations}};

  nlohmann::json hubs = nlohmann::json::array();
  for (const auto& h : hubs_) {
    nlohmann::json entry{{"hub", to_string(h.hub)}, {"status", status_name(h.status)}};
    if (!h.word.empty()) entry["word"] = h.word;
    hubs.push_back(entry);
  }
  j["hubs"] = hubs;

  nlohmann::json bindings = nlohmann::json::array();
  for (const Binding& b : bindings_) {
    if (b.released) continue;
    nlohmann::json entry;
    if (b.kind == BindingKind::Concept) {
      entry = {{"kind", "concept"}, {"word", b.word}, {"hub", to_string(b.hub)}};
    } else {
      entry = {{"kind", "cell"}, {"from", to_string(b.hub)}, {"to", to_string(b.to)}, {"relation", b.relation}};
    }
    entry["wm"] = network_.activation(b.wm);
    entry["active"] = is_active(b.id);
    bindings.push_back(entry);
  }
  j["bindings"] = bindings;
  j["network"] = to_json(network_.state(), network_);
  return j;
}

Blackboard Blackboard::restore(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "nba-blackboard") {
      throw Error(ErrorCode::StateFormat, "not a blackboard snapshot");
    }
    if (j.value("version", 0) != 1) throw Error(ErrorCode::StateFormat, "unsupported snapshot version");

    LexiconFile lex;
    for (const auto& w : j.at("lexicon").at("words")) {
      auto type = word_type_from_tag(w.at("type").get<std::string>());
      if (!type) throw Error(ErrorCode::StateFormat, "bad word type in snapshot");
      lex.words.push_back({w.at("word").get<std::string>(), *type});
    }
    for (const auto& r : j.at("lexicon").at("relations")) {
      lex.relations.push_back(
          {r.at("subject").get<std::string>(), r.at("label").get<std::string>(), r.at("object").get<std::string>()});
    }
    Blackboard bb(blackboard_config_from_json(j.at("config")), lex);

    for (const auto& b : j.at("bindings")) {
      // A binding whose WM lapsed (hold horizon) carries no structure.
      if (!b.value("active", true)) continue;
      const std::string kind = b.at("kind").get<std::string>();
      if (kind == "concept") {
        bb.bind_concept(b.at("word").get<std::string>(), hub_field(b, "hub"));
      } else if (kind == "cell") {
        bb.bind_hubs(hub_field(b, "from"), hub_field(b, "to"), b.at("relation").get<std::string>());
      } else {
        throw Error(ErrorCode::StateFormat, "unknown binding kind '" + kind + "'");
      }
    }
    for (const auto& h : j.at("hubs")) {
      HubRef ref = hub_field(h, "hub");
      bb.check_hub(ref);
      HubState& s = bb.hubs_[bb.global_index(ref)];
      const std::string status = h.at("status").get<std::string>();
      if (status == "free") {
        s.status = HubStatus::Free;
      } else if (status == "reserved") {
        s.status = HubStatus::Reserved;
      } else if (status == "bound") {
        s.status = HubStatus::Bound;
      } else {
        throw Error(ErrorCode::StateFormat, "unknown hub status '" + status + "'");
      }
      s.word = h.value("word", "");
    }
    bb.network_.set_state(network_state_from_json(j.at("network"), bb.network_));
    return bb;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::StateFormat, e.what());
  }
}

}  // namespace nba
