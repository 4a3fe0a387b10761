#include "nba/lexicon.hpp"

#include <algorithm>

#include "nba/error.hpp"
#include "nba/labels.hpp"
#include "text_util.hpp"

namespace nba {

std::string_view tag(WordType type) {
  switch (type) {
    case WordType::Noun: return "N";
    case WordType::Verb: return "V";
    case WordType::Adjective: return "ADJ";
    case WordType::Preposition: return "P";
    case WordType::Determiner: return "DET";
    case WordType::Other: return "X";
  }
  return "X";
}

std::optional<WordType> word_type_from_tag(std::string_view t) {
  if (t == "N") return WordType::Noun;
  if (t == "V") return WordType::Verb;
  if (t == "ADJ") return WordType::Adjective;
  if (t == "P") return WordType::Preposition;
  if (t == "DET") return WordType::Determiner;
  if (t == "X") return WordType::Other;
  return std::nullopt;
}

std::string fold_case(std::string_view word) {
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

const LexicalEntry& Lexicon::add_word(Network& network, std::string_view word, WordType type) {
  std::string folded = fold_case(detail::trim(word));
  if (folded.empty()) throw Error(ErrorCode::InvalidArgument, "word must be nonempty");
  if (by_word_.contains(folded)) throw Error(ErrorCode::DuplicateWord, "'" + folded + "' already in lexicon");

  PopulationId concept_id = network.add_population(PopulationKind::Concept);
  by_word_.emplace(folded, entries_.size());
  by_concept_.emplace(concept_id.value, entries_.size());
  entries_.push_back(LexicalEntry{std::move(folded), type, concept_id});
  return entries_.back();
}

void Lexicon::ensure_control(Network& network, const std::string& label) {
  if (controls_.insert(label).second) network.add_control_population(label);
}

void Lexicon::add_semantic_relation(Network& network, std::string_view subject, std::string_view label,
                                    std::string_view object) {
  const LexicalEntry& s = entry(subject);
  const LexicalEntry& o = entry(object);
  std::string l(detail::trim(label));
  if (l.empty()) throw Error(ErrorCode::InvalidArgument, "relation label must be nonempty");

  SemanticRelation rel{s.word, l, o.word};
  if (std::find(relations_.begin(), relations_.end(), rel) != relations_.end()) return;

  const std::string forward = labels::semantic(l);
  const std::string reverse = labels::semantic(l, true);
  ensure_control(network, forward);
  ensure_control(network, reverse);
  network.add_gated_connection(s.concept_id, o.concept_id, Gate::control_gate(forward));
  network.add_gated_connection(o.concept_id, s.concept_id, Gate::control_gate(reverse));
  relations_.push_back(std::move(rel));
  relation_labels_.insert(l);
}

const LexicalEntry* Lexicon::find(std::string_view word) const {
  auto it = by_word_.find(fold_case(word));
  return it == by_word_.end() ? nullptr : &entries_[it->second];
}

const LexicalEntry& Lexicon::entry(std::string_view word) const {
  const LexicalEntry* e = find(word);
  if (!e) throw Error(ErrorCode::UnknownWord, "'" + std::string(word) + "' is not in the lexicon");
  return *e;
}

WordType Lexicon::classify(std::string_view word) const { return entry(word).type; }

const LexicalEntry* Lexicon::entry_for(PopulationId concept_id) const {
  auto it = by_concept_.find(concept_id.value);
  return it == by_concept_.end() ? nullptr : &entries_[it->second];
}

bool Lexicon::has_relation_label(std::string_view label) const {
  return relation_labels_.contains(std::string(label));
}

namespace {

SemanticRelation relation_row(const std::vector<std::string_view>& cols, int line) {
  SemanticRelation r{fold_case(detail::trim(cols[0])), std::string(detail::trim(cols[1])),
                     fold_case(detail::trim(cols[2]))};
  if (r.subject.empty() || r.label.empty() || r.object.empty()) {
    throw Error(ErrorCode::ParseError, "empty field in relation row", line);
  }
  return r;
}

}  // namespace

LexiconFile parse_lexicon(std::string_view text) {
  LexiconFile file;
  std::unordered_map<std::string, int> seen;
  std::vector<int> relation_lines;
  for (const auto& [number, line] : detail::split_lines(text)) {
    if (detail::is_blank_or_comment(line)) continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() == 2) {
      std::string word = fold_case(detail::trim(cols[0]));
      if (word.empty()) throw Error(ErrorCode::ParseError, "empty word", number);
      auto type = word_type_from_tag(detail::trim(cols[1]));
      if (!type) {
        throw Error(ErrorCode::ParseError, "unknown word type '" + std::string(cols[1]) + "'", number);
      }
      if (!seen.emplace(word, number).second) {
        throw Error(ErrorCode::DuplicateWord, "'" + word + "' already defined", number);
      }
      file.words.push_back({std::move(word), *type});
    } else if (cols.size() == 3) {
      file.relations.push_back(relation_row(cols, number));
      relation_lines.push_back(number);
    } else {
      throw Error(ErrorCode::ParseError, "expected word<TAB>type", number);
    }
  }
  for (std::size_t i = 0; i < file.relations.size(); ++i) {
    for (const std::string* w : {&file.relations[i].subject, &file.relations[i].object}) {
      if (!seen.contains(*w)) {
        throw Error(ErrorCode::UnknownWord, "'" + *w + "' used in a relation but not defined", relation_lines[i]);
      }
    }
  }
  return file;
}

std::vector<SemanticRelation> parse_semantic_relations(std::string_view text) {
  std::vector<SemanticRelation> out;
  for (const auto& [number, line] : detail::split_lines(text)) {
    if (detail::is_blank_or_comment(line)) continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 3) throw Error(ErrorCode::ParseError, "expected subject<TAB>label<TAB>object", number);
    out.push_back(relation_row(cols, number));
  }
  return out;
}

Lexicon load_lexicon(Network& network, const LexiconFile& file) {
  Lexicon lexicon;
  for (const auto& w : file.words) lexicon.add_word(network, w.word, w.type);
  for (const auto& r : file.relations) lexicon.add_semantic_relation(network, r.subject, r.label, r.object);
  return lexicon;
}

Lexicon load_lexicon(Network& network, std::string_view text) {
  return load_lexicon(network, parse_lexicon(text));
}

}  // namespace nba
