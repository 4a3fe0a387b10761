#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nba/blackboard.hpp"
#include "nba/lexicon.hpp"

namespace nba {

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  WordType type = WordType::Other;
  friend bool operator==(const Token&, const Token&) = default;
};

struct DependencyArc {
  int head = 0;  // 0 = root
  int dependent = 0;
  std::string label;
  friend bool operator==(const DependencyArc&, const DependencyArc&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;
};

// One sentence in the CoNLL-U subset: ID, FORM, UPOS, HEAD and DEPREL are
// read, the other five columns may be `_`.
Sentence parse_conllu(std::string_view text);
// Blank-line separated sentences.
std::vector<Sentence> parse_conllu_document(std::string_view text);
// Throws NotATree unless ids run 1..n and every token reaches the root.
void validate_tree(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs);

// ---------------------------------------------------------------------------
// Dependency label -> blackboard relation.

enum class ArcAction { Relation, Prep, Clause, Case, Ignore };

struct LabelRule {
  ArcAction action = ArcAction::Ignore;
  std::string relation;        // ArcAction::Relation
  bool from_dependent = false;  // cell runs dependent -> head (agent)
  friend bool operator==(const LabelRule&, const LabelRule&) = default;
};

using RelationMap = std::map<std::string, LabelRule, std::less<>>;

RelationMap default_relation_map();
std::optional<LabelRule> map_label(const RelationMap& map, std::string_view label);
// "agent", "theme", "modifier", "prep:<p>", "prep", "clause", "case",
// "ignore"; throws InvalidConfig otherwise.
LabelRule rule_from_name(std::string_view name);
std::string rule_name(const LabelRule& rule);

// ---------------------------------------------------------------------------
// Control programs. Slots name hubs symbolically: token slots use the token
// index, clause hubs get slots past the last token.

namespace instr {

struct Allocate {
  PoolKind pool;
  int slot;
  friend bool operator==(const Allocate&, const Allocate&) = default;
};
struct BindConcept {
  std::string word;
  WordType type;
  int slot;
  friend bool operator==(const BindConcept&, const BindConcept&) = default;
};
struct BindHubs {
  int from;
  int to;
  std::string relation;
  // Token range of the dependency the binding realizes.
  int first_token;
  int last_token;
  friend bool operator==(const BindHubs&, const BindHubs&) = default;
};
struct AssertControl {
  std::string label;
  bool on = true;
  friend bool operator==(const AssertControl&, const AssertControl&) = default;
};
// Releases every binding this program made on the slot's hub.
struct Release {
  int slot;
  friend bool operator==(const Release&, const Release&) = default;
};
struct CloseConstituent {
  int start;
  int end;
  int head;
  friend bool operator==(const CloseConstituent&, const CloseConstituent&) = default;
};

}  // namespace instr

using ControlInstruction = std::variant<instr::Allocate, instr::BindConcept, instr::BindHubs,
                                        instr::AssertControl, instr::Release, instr::CloseConstituent>;

std::string to_string(const ControlInstruction& instruction);

struct SpanDef {
  int start = 0;
  int end = 0;
  int head = 0;
  friend auto operator<=>(const SpanDef&, const SpanDef&) = default;
};

struct ControlProgram {
  std::vector<ControlInstruction> instructions;
  // Token being processed when each instruction is issued.
  std::vector<int> token_of;
  std::vector<Token> tokens;
  std::vector<SpanDef> spans;

  // Instructions issued while reading tokens 1..last_token.
  ControlProgram prefix(int last_token) const;
};

// Maximal projection of every head with a dependent, plus the head-final
// partial projection of heads that also take right dependents.
std::vector<SpanDef> constituent_spans(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs);

struct CompileOptions {
  bool strict_labels = true;
  // Relations the target blackboard instantiates; empty = accept any.
  std::set<std::string, std::less<>> relations;
  // When set together with !auto_add_words, unknown words are rejected.
  const Lexicon* lexicon = nullptr;
  bool auto_add_words = true;
};

ControlProgram compile(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs,
                       const RelationMap& relation_map, const CompileOptions& options = {});
ControlProgram compile(const Sentence& sentence, const RelationMap& relation_map,
                       const CompileOptions& options = {});

// ---------------------------------------------------------------------------

struct ConstituentSpan {
  SpanDef span;
  std::optional<std::int64_t> open_step;
  std::optional<std::int64_t> close_step;
};

struct ConnectionPathReport {
  std::vector<BindingId> bindings;
  std::map<int, HubRef> slots;
  // Network time right after each instruction's step.
  std::vector<std::int64_t> instruction_steps;
  std::vector<ConstituentSpan> spans;
  std::vector<std::string> added_words;
};

struct ExecuteOptions {
  bool auto_add_words = true;
  // Idle steps after the last instruction.
  int trailing_steps = 2;
};

// Called once before the first instruction, then after every step.
// `instruction` is the index just executed, or nullopt for initial/idle samples.
using StepObserver = std::function<void(const Blackboard&, std::optional<std::size_t> instruction)>;

// Runs the program one dynamics step per instruction. On failure the
// blackboard is rolled back to its state before the call.
ConnectionPathReport execute(const ControlProgram& program, Blackboard& blackboard,
                             const ExecuteOptions& options = {}, const StepObserver& observer = {});

// Compile options matching a blackboard's relation set.
CompileOptions compile_options_for(const Blackboard& blackboard, bool strict_labels = true);

}  // namespace nba
