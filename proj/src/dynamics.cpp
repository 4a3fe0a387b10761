#include "nba/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nba/error.hpp"

namespace nba {

std::string_view to_string(PopulationKind kind) {
  switch (kind) {
    case PopulationKind::Concept: return "concept";
    case PopulationKind::Hub: return "hub";
    case PopulationKind::WorkingMemory: return "wm";
    case PopulationKind::Control: return "control";
  }
  return "?";
}

double DynamicsParams::decay_for(PopulationKind kind) const {
  switch (kind) {
    case PopulationKind::Concept: return concept_decay;
    case PopulationKind::Hub: return hub_decay;
    case PopulationKind::Control: return control_decay;
    case PopulationKind::WorkingMemory: return wm_decay;
  }
  return 0.0;
}

namespace {

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

Network::Network(DynamicsParams params) : params_(params) {
  for (double d : {params.concept_decay, params.hub_decay, params.control_decay, params.wm_decay}) {
    if (!in_unit(d)) throw Error(ErrorCode::InvalidArgument, "decay must lie in [0,1]");
  }
  if (params.wm_hold_steps < 0) throw Error(ErrorCode::InvalidArgument, "wm_hold_steps must be >= 0");
}

PopulationId Network::add_population(PopulationKind kind, double sustain_threshold) {
  if (!in_unit(sustain_threshold)) {
    throw Error(ErrorCode::InvalidArgument, "sustain_threshold must lie in [0,1]");
  }
  PopulationId id{static_cast<std::uint32_t>(populations_.size())};
  populations_.push_back(Population{id, kind, sustain_threshold, {}});
  outgoing_.emplace_back();
  control_label_of_.push_back(-1);
  state_.activation.push_back(0.0);
  state_.sustained.push_back(0);
  state_.sustained_since.push_back(0);
  return id;
}

PopulationId Network::add_control_population(std::string_view label) {
  PopulationId id = add_population(PopulationKind::Control);
  populations_[id.value].control_label = std::string(label);
  control_label_of_[id.value] = intern(label);
  return id;
}

ConnectionId Network::add_gated_connection(PopulationId source, PopulationId target, const Gate& gate,
                                           double gain) {
  check(source);
  check(target);
  if (!(std::isfinite(gain) && gain > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "connection gain must be > 0");
  }
  CompiledGate compiled;
  if (gate.binding) {
    check(*gate.binding);
    compiled.binding = gate.binding->value;
  }
  if (gate.control) compiled.label = intern(*gate.control);

  ConnectionId id{static_cast<std::uint32_t>(connections_.size())};
  connections_.push_back(GatedConnection{id, source, target, gate, gain});
  compiled_.push_back(compiled);
  outgoing_[source.value].push_back(id);
  return id;
}

std::int32_t Network::intern(std::string_view label) {
  if (auto it = label_ids_.find(std::string(label)); it != label_ids_.end()) return it->second;
  auto id = static_cast<std::int32_t>(labels_.size());
  labels_.emplace_back(label);
  label_ids_.emplace(std::string(label), id);
  state_.controls.resize(labels_.size(), 0);
  return id;
}

std::int32_t Network::find_label(std::string_view label) const {
  auto it = label_ids_.find(std::string(label));
  return it == label_ids_.end() ? -1 : it->second;
}

void Network::check(PopulationId id) const {
  if (id.value >= populations_.size()) {
    throw Error(ErrorCode::UnknownPopulation, "no population with id " + std::to_string(id.value));
  }
}

void Network::set_control(std::string_view label, bool on) {
  if (on) {
    state_.controls[intern(label)] = 1;
  } else {
    set_control(state_, label, false);
  }
}

void Network::set_control(NetworkState& state, std::string_view label, bool on) const {
  std::int32_t id = find_label(label);
  if (id < 0) return;  // nothing is gated by this label
  if (state.controls.size() <= static_cast<std::size_t>(id)) state.controls.resize(labels_.size(), 0);
  state.controls[id] = on ? 1 : 0;
}

bool Network::control_asserted(std::string_view label) const {
  std::int32_t id = find_label(label);
  return id >= 0 && static_cast<std::size_t>(id) < state_.controls.size() && state_.controls[id];
}

std::vector<std::string> Network::asserted_controls() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < state_.controls.size(); ++i) {
    if (state_.controls[i]) out.push_back(labels_[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Network::clear_controls() { std::fill(state_.controls.begin(), state_.controls.end(), 0); }

void Network::inject(PopulationId population, double level) { inject(state_, population, level); }

void Network::inject(NetworkState& state, PopulationId population, double level) const {
  check(population);
  if (!in_unit(level)) throw Error(ErrorCode::InvalidArgument, "inject level must lie in [0,1]");
  double& a = state.activation[population.value];
  a = std::max(a, level);
  const Population& p = populations_[population.value];
  if (p.kind == PopulationKind::WorkingMemory && a >= p.sustain_threshold &&
      !state.sustained[population.value]) {
    state.sustained[population.value] = 1;
    state.sustained_since[population.value] = state.time;
  }
}

void Network::release(PopulationId population) {
  check(population);
  state_.activation[population.value] = 0.0;
  state_.sustained[population.value] = 0;
  state_.sustained_since[population.value] = 0;
}

void Network::step() { advance(state_); }

double Network::activation(PopulationId population) const {
  check(population);
  return state_.activation[population.value];
}

bool Network::sustained(PopulationId population) const {
  check(population);
  return state_.sustained[population.value] != 0;
}

bool Network::open(const CompiledGate& gate, const NetworkState& state) const {
  if (gate.label >= 0) {
    if (static_cast<std::size_t>(gate.label) >= state.controls.size() || !state.controls[gate.label]) {
      return false;
    }
  }
  if (gate.binding >= 0) {
    if (state.activation[gate.binding] < populations_[gate.binding].sustain_threshold) return false;
  }
  return true;
}

bool Network::gate_open(const GatedConnection& connection, const NetworkState& state) const {
  return open(compiled_[connection.id.value], state);
}

bool Network::gate_open(ConnectionId connection) const {
  if (connection.value >= connections_.size()) {
    throw Error(ErrorCode::InvalidArgument, "no connection with id " + std::to_string(connection.value));
  }
  return open(compiled_[connection.value], state_);
}

void Network::advance(NetworkState& state) const {
  const std::size_t n = populations_.size();
  std::vector<double> input(n, 0.0);

  // Gates are evaluated against the pre-step state: updates are synchronous.
  for (std::size_t src = 0; src < n; ++src) {
    const double a = state.activation[src];
    if (a <= 0.0) continue;
    for (ConnectionId cid : outgoing_[src]) {
      if (open(compiled_[cid.value], state)) {
        const GatedConnection& c = connections_[cid.value];
        input[c.target.value] += c.gain * a;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t label = control_label_of_[i];
    if (label >= 0 && static_cast<std::size_t>(label) < state.controls.size() && state.controls[label]) {
      input[i] += 1.0;
    }
  }

  const std::int64_t next_time = state.time + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Population& p = populations_[i];
    double next = params_.decay_for(p.kind) * state.activation[i] + input[i];
    next = std::clamp(next, 0.0, 1.0);
    if (p.kind == PopulationKind::WorkingMemory) {
      if (state.sustained[i]) {
        next = std::max(next, p.sustain_threshold);
        if (params_.wm_hold_steps > 0 && next_time - state.sustained_since[i] >= params_.wm_hold_steps) {
          next = 0.0;
          state.sustained[i] = 0;
        }
      } else if (next >= p.sustain_threshold) {
        state.sustained[i] = 1;
        state.sustained_since[i] = next_time;
      }
    }
    state.activation[i] = next;
  }
  state.time = next_time;
}

void Network::set_state(NetworkState state) {
  const std::size_t n = populations_.size();
  if (state.activation.size() != n || state.sustained.size() != n || state.sustained_since.size() != n) {
    throw Error(ErrorCode::StateFormat, "state does not match network size");
  }
  state.controls.resize(labels_.size(), 0);
  state_ = std::move(state);
}

const Population& Network::population(PopulationId id) const {
  check(id);
  return populations_[id.value];
}

std::span<const ConnectionId> Network::outgoing(PopulationId id) const {
  check(id);
  return outgoing_[id.value];
}

double Network::total_activation(std::initializer_list<PopulationKind> kinds) const {
  double sum = 0.0;
  for (const Population& p : populations_) {
    if (std::find(kinds.begin(), kinds.end(), p.kind) != kinds.end()) sum += state_.activation[p.id.value];
  }
  return sum;
}

nlohmann::json to_json(const NetworkState& state, const Network& network) {
  nlohmann::json j;
  j["time"] = state.time;
  j["activation"] = state.activation;
  std::vector<bool> sustained(state.sustained.begin(), state.sustained.end());
  j["sustained"] = sustained;
  j["sustained_since"] = state.sustained_since;
  nlohmann::json controls = nlohmann::json::array();
  const auto& labels = network.labels();
  for (std::size_t i = 0; i < state.controls.size() && i < labels.size(); ++i) {
    if (state.controls[i]) controls.push_back(labels[i]);
  }
  j["controls"] = controls;
  return j;
}

NetworkState network_state_from_json(const nlohmann::json& j, const Network& network) {
  try {
    NetworkState s;
    s.time = j.at("time").get<std::int64_t>();
    s.activation = j.at("activation").get<std::vector<double>>();
    auto sustained = j.at("sustained").get<std::vector<bool>>();
    s.sustained.assign(sustained.begin(), sustained.end());
    s.sustained_since = j.at("sustained_since").get<std::vector<std::int64_t>>();
    const std::size_t n = network.population_count();
    if (s.activation.size() != n || s.sustained.size() != n || s.sustained_since.size() != n) {
      throw Error(ErrorCode::StateFormat, "network state size does not match the rebuilt structure");
    }
    for (double a : s.activation) {
      if (!in_unit(a)) throw Error(ErrorCode::StateFormat, "activation outside [0,1]");
    }
    s.controls = network.state().controls;
    std::fill(s.controls.begin(), s.controls.end(), 0);
    for (const auto& label : j.at("controls")) network.set_control(s, label.get<std::string>(), true);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::StateFormat, std::string("network state: ") + e.what());
  }
}

}  // namespace nba
