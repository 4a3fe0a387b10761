#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nba/dynamics.hpp"

namespace nba {

enum class WordType { Noun, Verb, Adjective, Preposition, Determiner, Other };

// Lexicon file tags: N, V, ADJ, P, DET, X.
std::string_view tag(WordType type);
std::optional<WordType> word_type_from_tag(std::string_view tag);

// ASCII case folding; bytes outside ASCII pass through untouched.
std::string fold_case(std::string_view word);

struct LexicalEntry {
  std::string word;
  WordType type = WordType::Other;
  PopulationId concept_id;
};

struct SemanticRelation {
  std::string subject;
  std::string label;
  std::string object;
  friend bool operator==(const SemanticRelation&, const SemanticRelation&) = default;
};

// Parsed lexicon TSV, before any population exists.
struct LexiconFile {
  struct Word {
    std::string word;
    WordType type;
  };
  std::vector<Word> words;
  std::vector<SemanticRelation> relations;
};

// `word<TAB>type` rows; three-column rows are semantic relations
// `subject<TAB>label<TAB>object`. Blank and `#` lines are skipped.
LexiconFile parse_lexicon(std::string_view text);
// A relations-only file: every row has three columns.
std::vector<SemanticRelation> parse_semantic_relations(std::string_view text);

// Concept populations for words plus long-term control-gated relations
// between them. Each word owns exactly one concept population for its whole
// lifetime; composition never copies it.
class Lexicon {
 public:
  const LexicalEntry& add_word(Network& network, std::string_view word, WordType type);
  // Installs subject -> object gated by the label, and the mirrored
  // object -> subject edge for reverse queries. Repeats are no-ops.
  void add_semantic_relation(Network& network, std::string_view subject, std::string_view label,
                             std::string_view object);

  bool contains(std::string_view word) const { return find(word) != nullptr; }
  const LexicalEntry* find(std::string_view word) const;
  const LexicalEntry& entry(std::string_view word) const;
  WordType classify(std::string_view word) const;
  // Word whose concept population is `concept_id`, if any.
  const LexicalEntry* entry_for(PopulationId concept_id) const;

  bool has_relation_label(std::string_view label) const;
  const std::vector<LexicalEntry>& entries() const { return entries_; }
  const std::vector<SemanticRelation>& relations() const { return relations_; }
  std::size_t size() const { return entries_.size(); }

 private:
  void ensure_control(Network& network, const std::string& label);

  std::vector<LexicalEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_word_;
  std::unordered_map<std::uint32_t, std::size_t> by_concept_;
  std::vector<SemanticRelation> relations_;
  std::unordered_set<std::string> relation_labels_;
  std::unordered_set<std::string> controls_;
};

Lexicon load_lexicon(Network& network, const LexiconFile& file);
Lexicon load_lexicon(Network& network, std::string_view text);

}  // namespace nba
