#include "nba/encoder.hpp"

#include <algorithm>
#include <sstream>

#include "nba/error.hpp"
#include "nba/labels.hpp"

namespace nba {

RelationMap default_relation_map() {
  RelationMap m;
  m["nsubj"] = LabelRule{ArcAction::Relation, "agent", true};
  m["obj"] = LabelRule{ArcAction::Relation, "theme", false};
  m["dobj"] = LabelRule{ArcAction::Relation, "theme", false};
  m["amod"] = LabelRule{ArcAction::Relation, "modifier", false};
  m["flat"] = LabelRule{ArcAction::Relation, "modifier", false};
  m["compound"] = LabelRule{ArcAction::Relation, "modifier", false};
  m["nmod"] = LabelRule{ArcAction::Prep, {}, false};
  m["case"] = LabelRule{ArcAction::Case, {}, false};
  m["acl"] = LabelRule{ArcAction::Clause, {}, false};
  m["acl:relcl"] = LabelRule{ArcAction::Clause, {}, false};
  m["det"] = LabelRule{ArcAction::Ignore, {}, false};
  m["punct"] = LabelRule{ArcAction::Ignore, {}, false};
  m["root"] = LabelRule{ArcAction::Ignore, {}, false};
  return m;
}

std::optional<LabelRule> map_label(const RelationMap& map, std::string_view label) {
  auto it = map.find(label);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

LabelRule rule_from_name(std::string_view name) {
  if (name == "agent") return LabelRule{ArcAction::Relation, "agent", true};
  if (name == "theme" || name == "modifier") return LabelRule{ArcAction::Relation, std::string(name), false};
  if (name == "prep") return LabelRule{ArcAction::Prep, {}, false};
  if (name.starts_with("prep:") && name.size() > 5) return LabelRule{ArcAction::Relation, std::string(name), false};
  if (name == "clause") return LabelRule{ArcAction::Clause, {}, false};
  if (name == "case") return LabelRule{ArcAction::Case, {}, false};
  if (name == "ignore") return LabelRule{ArcAction::Ignore, {}, false};
  throw Error(ErrorCode::InvalidConfig, "unknown label rule '" + std::string(name) + "'");
}

std::string rule_name(const LabelRule& rule) {
  switch (rule.action) {
    case ArcAction::Relation: return rule.relation;
    case ArcAction::Prep: return "prep";
    case ArcAction::Clause: return "clause";
    case ArcAction::Case: return "case";
    case ArcAction::Ignore: return "ignore";
  }
  return "ignore";
}

std::string to_string(const ControlInstruction& instruction) {
  std::ostringstream out;
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, instr::Allocate>) {
          out << "Allocate " << to_string(i.pool) << " -> s" << i.slot;
        } else if constexpr (std::is_same_v<T, instr::BindConcept>) {
          out << "BindConcept " << i.word << " -> s" << i.slot;
        } else if constexpr (std::is_same_v<T, instr::BindHubs>) {
          out << "BindHubs s" << i.from << " -> s" << i.to << " " << i.relation;
        } else if constexpr (std::is_same_v<T, instr::AssertControl>) {
          out << "AssertControl " << i.label << (i.on ? " on" : " off");
        } else if constexpr (std::is_same_v<T, instr::Release>) {
          out << "Release s" << i.slot;
        } else {
          out << "CloseConstituent " << i.start << ".." << i.end;
        }
      },
      instruction);
  return out.str();
}

ControlProgram ControlProgram::prefix(int last_token) const {
  ControlProgram out;
  out.tokens = tokens;
  out.spans = spans;
  for (std::size_t k = 0; k < instructions.size() && token_of[k] <= last_token; ++k) {
    out.instructions.push_back(instructions[k]);
    out.token_of.push_back(token_of[k]);
  }
  return out;
}

std::vector<SpanDef> constituent_spans(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs) {
  const int n = static_cast<int>(tokens.size());
  std::vector<std::vector<int>> children(n + 1);
  for (const auto& a : arcs) children[a.head].push_back(a.dependent);

  // Leftmost/rightmost token of each subtree.
  std::vector<int> lo(n + 1), hi(n + 1);
  std::function<void(int)> visit = [&](int t) {
    lo[t] = hi[t] = t;
    for (int c : children[t]) {
      visit(c);
      lo[t] = std::min(lo[t], lo[c]);
      hi[t] = std::max(hi[t], hi[c]);
    }
  };
  for (int root : children[0]) visit(root);

  std::set<SpanDef> spans;
  for (int h = 1; h <= n; ++h) {
    if (children[h].empty()) continue;
    spans.insert(SpanDef{lo[h], hi[h], h});
    int left = h;
    bool has_right = false;
    for (int c : children[h]) {
      if (c < h) left = std::min(left, lo[c]);
      if (c > h) has_right = true;
    }
    if (left < h && has_right) spans.insert(SpanDef{left, h, h});
  }
  return {spans.begin(), spans.end()};
}

namespace {

struct Event {
  int ready;  // token at which both endpoints are known
  int order;
  std::vector<ControlInstruction> instructions;
};

class Compiler {
 public:
  Compiler(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs, const RelationMap& map,
           const CompileOptions& options)
      : tokens_(tokens), arcs_(arcs), map_(map), options_(options), n_(static_cast<int>(tokens.size())) {
    children_.resize(n_ + 1);
    for (const auto& a : arcs_) children_[a.head].push_back(&a);
  }

  ControlProgram run() {
    check_words();
    for (std::size_t i = 0; i < arcs_.size(); ++i) plan(arcs_[i], static_cast<int>(i));
    std::stable_sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) {
      return std::tie(a.ready, a.order) < std::tie(b.ready, b.order);
    });

    ControlProgram program;
    program.tokens = tokens_;
    program.spans = constituent_spans(tokens_, arcs_);
    std::vector<SpanDef> closing = program.spans;
    std::sort(closing.begin(), closing.end(), [](const SpanDef& a, const SpanDef& b) {
      return std::make_tuple(a.end, a.end - a.start, -a.start) < std::make_tuple(b.end, b.end - b.start, -b.start);
    });

    auto emit = [&](ControlInstruction ins, int token) {
      program.instructions.push_back(std::move(ins));
      program.token_of.push_back(token);
    };
    std::size_t next_event = 0;
    std::size_t next_close = 0;
    for (int t = 1; t <= n_; ++t) {
      const Token& tok = token(t);
      if (auto pool = pool_for(tok.type)) {
        emit(instr::Allocate{*pool, t}, t);
        emit(instr::BindConcept{fold_case(tok.surface), tok.type, t}, t);
      }
      for (; next_event < events_.size() && events_[next_event].ready == t; ++next_event) {
        for (auto& ins : events_[next_event].instructions) emit(std::move(ins), t);
      }
      for (; next_close < closing.size() && closing[next_close].end == t; ++next_close) {
        const SpanDef& s = closing[next_close];
        emit(instr::CloseConstituent{s.start, s.end, s.head}, t);
      }
    }
    return program;
  }

 private:
  const Token& token(int index) const { return tokens_[index - 1]; }
  bool content(int index) const { return index >= 1 && pool_for(token(index).type).has_value(); }

  void check_words() const {
    if (!options_.lexicon || options_.auto_add_words) return;
    for (const auto& t : tokens_) {
      if (pool_for(t.type) && !options_.lexicon->contains(t.surface)) {
        throw Error(ErrorCode::UnknownWord, "'" + t.surface + "' is not in the lexicon");
      }
    }
  }

  // Reports an arc the blackboard cannot express: an error in strict mode,
  // skipped otherwise.
  void unsupported(const DependencyArc& arc, const std::string& why) const {
    if (options_.strict_labels) {
      throw Error(ErrorCode::UnmappedLabel, "arc " + std::to_string(arc.head) + " -" + arc.label + "-> " +
                                                std::to_string(arc.dependent) + ": " + why);
    }
  }

  bool relation_available(const std::string& relation) const {
    return options_.relations.empty() || options_.relations.contains(relation);
  }

  bool shape_fits(const std::string& relation, int from, int to) const {
    auto shape = relation_shape(relation);
    if (!shape) return false;
    auto a = pool_for(token(from).type);
    auto b = pool_for(token(to).type);
    return std::any_of(shape->legs.begin(), shape->legs.end(),
                       [&](const auto& leg) { return leg.first == *a && leg.second == *b; });
  }

  // The acl arc whose dependent is `verb`, if any.
  const DependencyArc* clause_arc_into(int verb) const {
    for (const auto& a : arcs_) {
      if (a.dependent != verb || a.head == 0) continue;
      auto rule = map_label(map_, a.label);
      if (rule && rule->action == ArcAction::Clause) return &a;
    }
    return nullptr;
  }

  std::optional<std::string> case_marker(int nominal) const {
    for (const DependencyArc* c : children_[nominal]) {
      auto rule = map_label(map_, c->label);
      if (rule && rule->action == ArcAction::Case) return fold_case(token(c->dependent).surface);
    }
    return std::nullopt;
  }

  void bind_event(const DependencyArc& arc, int order, const std::string& relation, int from, int to) {
    if (!relation_available(relation)) return unsupported(arc, "relation " + relation + " is not configured");
    if (!shape_fits(relation, from, to)) return unsupported(arc, "no " + relation + " cell between these word types");
    events_.push_back(Event{std::max(arc.head, arc.dependent), order,
                            {instr::BindHubs{from, to, relation, std::min(arc.head, arc.dependent),
                                             std::max(arc.head, arc.dependent)}}});
  }

  void plan(const DependencyArc& arc, int order) {
    if (arc.head == 0) return;
    auto rule = map_label(map_, arc.label);
    if (!rule) return unsupported(arc, "label is not mapped");
    switch (rule->action) {
      case ArcAction::Ignore:
      case ArcAction::Case: return;
      case ArcAction::Relation:
      case ArcAction::Prep: {
        if (!content(arc.head) || !content(arc.dependent)) {
          // A relativizer inside a relative clause is resolved by the clause.
          if (!content(arc.dependent) && clause_arc_into(arc.head)) return;
          return unsupported(arc, "endpoints must be content words");
        }
        std::string relation = rule->relation;
        if (rule->action == ArcAction::Prep) {
          auto p = case_marker(arc.dependent);
          if (!p) return unsupported(arc, "nominal modifier without a case marker");
          relation = "prep:" + *p;
        }
        const int from = rule->from_dependent ? arc.dependent : arc.head;
        const int to = rule->from_dependent ? arc.head : arc.dependent;
        return bind_event(arc, order, relation, from, to);
      }
      case ArcAction::Clause: return plan_clause(arc, order);
    }
  }

  void plan_clause(const DependencyArc& arc, int order) {
    const int antecedent = arc.head;
    const int verb = arc.dependent;
    if (!content(antecedent) || token(verb).type != WordType::Verb) {
      return unsupported(arc, "clause needs a content head and a verb dependent");
    }
    if (!relation_available("clause")) return unsupported(arc, "relation clause is not configured");

    const int slot = n_ + ++clauses_;
    const int lo = std::min(antecedent, verb);
    const int hi = std::max(antecedent, verb);
    Event ev{hi, order, {}};
    ev.instructions.push_back(instr::Allocate{PoolKind::C, slot});
    ev.instructions.push_back(instr::BindHubs{antecedent, slot, "clause", lo, hi});
    ev.instructions.push_back(instr::BindHubs{slot, verb, "clause", lo, hi});

    // Gap filling: the antecedent takes the role the clause verb lacks, or
    // the role an explicit relativizer holds.
    std::optional<std::string> role;
    bool has_agent = false;
    bool has_theme = false;
    for (const DependencyArc* c : children_[verb]) {
      auto r = map_label(map_, c->label);
      if (!r || r->action != ArcAction::Relation) continue;
      if (!content(c->dependent)) {
        if (r->relation == "agent" || r->relation == "theme") role = r->relation;
        continue;
      }
      has_agent |= r->relation == "agent";
      has_theme |= r->relation == "theme";
    }
    if (!role) {
      if (!has_agent) {
        role = "agent";
      } else if (!has_theme) {
        role = "theme";
      }
    }
    if (role && pool_for(token(antecedent).type) == PoolKind::N && relation_available(*role)) {
      if (*role == "agent") {
        ev.instructions.push_back(instr::BindHubs{antecedent, verb, "agent", lo, hi});
      } else {
        ev.instructions.push_back(instr::BindHubs{verb, antecedent, "theme", lo, hi});
      }
    }
    events_.push_back(std::move(ev));
  }

  const std::vector<Token>& tokens_;
  const std::vector<DependencyArc>& arcs_;
  const RelationMap& map_;
  const CompileOptions& options_;
  const int n_;
  std::vector<std::vector<const DependencyArc*>> children_;
  std::vector<Event> events_;
  int clauses_ = 0;
};

}  // namespace

ControlProgram compile(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs,
                       const RelationMap& relation_map, const CompileOptions& options) {
  validate_tree(tokens, arcs);
  return Compiler(tokens, arcs, relation_map, options).run();
}

ControlProgram compile(const Sentence& sentence, const RelationMap& relation_map, const CompileOptions& options) {
  return compile(sentence.tokens, sentence.arcs, relation_map, options);
}

CompileOptions compile_options_for(const Blackboard& blackboard, bool strict_labels) {
  CompileOptions options;
  options.strict_labels = strict_labels;
  options.relations.insert(blackboard.config().relations.begin(), blackboard.config().relations.end());
  options.lexicon = &blackboard.lexicon();
  return options;
}

// ---------------------------------------------------------------------------

namespace {

struct AssertedLabel {
  std::string label;
  int first_token;
  int last_token;
};

class Executor {
 public:
  Executor(const ControlProgram& program, Blackboard& bb, const ExecuteOptions& options,
           const StepObserver& observer)
      : program_(program), bb_(bb), options_(options), observer_(observer) {}

  ConnectionPathReport run() {
    add_missing_words();
    const auto checkpoint = bb_.checkpoint();
    try {
      execute_all();
    } catch (...) {
      bb_.rollback(checkpoint);
      throw;
    }
    return std::move(report_);
  }

 private:
  void add_missing_words() {
    for (const auto& ins : program_.instructions) {
      const auto* bind = std::get_if<instr::BindConcept>(&ins);
      if (!bind || bb_.lexicon().contains(bind->word)) continue;
      if (!options_.auto_add_words) {
        throw Error(ErrorCode::UnknownWord, "'" + bind->word + "' is not in the lexicon");
      }
      bb_.add_word(bind->word, bind->type);
      report_.added_words.push_back(bind->word);
    }
  }

  HubRef slot(int s) const {
    auto it = report_.slots.find(s);
    if (it == report_.slots.end()) {
      throw Error(ErrorCode::InvalidArgument, "slot s" + std::to_string(s) + " used before allocation");
    }
    return it->second;
  }

  void step(std::optional<std::size_t> instruction) {
    bb_.network().step();
    if (observer_) observer_(bb_, instruction);
  }

  void execute_all() {
    for (const auto& s : program_.spans) report_.spans.push_back(ConstituentSpan{s, std::nullopt, std::nullopt});
    if (observer_) observer_(bb_, std::nullopt);

    for (std::size_t k = 0; k < program_.instructions.size(); ++k) {
      const int token = k < program_.token_of.size() ? program_.token_of[k] : 0;
      for (auto& span : report_.spans) {
        if (!span.open_step && span.span.start <= token) span.open_step = bb_.network().state().time;
      }
      std::visit([&](const auto& ins) { apply(ins); }, program_.instructions[k]);
      step(k);
      report_.instruction_steps.push_back(bb_.network().state().time);
      if (const auto* close = std::get_if<instr::CloseConstituent>(&program_.instructions[k])) {
        for (auto& span : report_.spans) {
          if (span.span.start == close->start && span.span.end == close->end && !span.close_step) {
            span.close_step = bb_.network().state().time;
          }
        }
      }
    }
    for (int i = 0; i < options_.trailing_steps; ++i) step(std::nullopt);
  }

  void apply(const instr::Allocate& ins) { report_.slots[ins.slot] = bb_.allocate_hub(ins.pool); }

  void apply(const instr::BindConcept& ins) {
    report_.bindings.push_back(bb_.bind_concept(ins.word, slot(ins.slot)));
  }

  void apply(const instr::BindHubs& ins) {
    const HubRef from = slot(ins.from);
    const HubRef to = slot(ins.to);
    std::string label = labels::episodic(ins.relation);
    bb_.network().set_control(label, true);
    asserted_.push_back({std::move(label), ins.first_token, ins.last_token});
    report_.bindings.push_back(bb_.bind_hubs(from, to, ins.relation));
  }

  void apply(const instr::AssertControl& ins) { bb_.network().set_control(ins.label, ins.on); }

  void apply(const instr::Release& ins) {
    const HubRef hub = slot(ins.slot);
    for (BindingId id : report_.bindings) {
      const Binding& b = bb_.binding(id);
      if (b.hub == hub || (b.kind == BindingKind::Cell && b.to == hub)) bb_.release(id);
    }
  }

  void apply(const instr::CloseConstituent& ins) {
    std::vector<AssertedLabel> kept;
    for (auto& a : asserted_) {
      if (a.first_token >= ins.start && a.last_token <= ins.end) {
        bb_.network().set_control(a.label, false);
      } else {
        kept.push_back(std::move(a));
      }
    }
    asserted_ = std::move(kept);
  }

  const ControlProgram& program_;
  Blackboard& bb_;
  const ExecuteOptions& options_;
  const StepObserver& observer_;
  ConnectionPathReport report_;
  std::vector<AssertedLabel> asserted_;
};

}  // namespace

ConnectionPathReport execute(const ControlProgram& program, Blackboard& blackboard, const ExecuteOptions& options,
                             const StepObserver& observer) {
  if (program.token_of.size() != program.instructions.size()) {
    throw Error(ErrorCode::InvalidArgument, "program token positions do not match its instructions");
  }
  return Executor(program, blackboard, options, observer).run();
}

}  // namespace nba
