#include "nba/query.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nba/error.hpp"
#include "nba/labels.hpp"
#include "text_util.hpp"

namespace nba {

namespace {

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) out.push_back(std::move(w));
  return out;
}

[[noreturn]] void syntax(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::QuerySyntaxError, "'" + std::string(text) + "': " + why);
}

}  // namespace

Query parse_query(std::string_view text) {
  Query q;
  std::string_view body = detail::trim(text);
  if (body.starts_with("sem:")) {
    q.mode = QueryMode::Semantic;
    q.explicit_mode = true;
    body = detail::trim(body.substr(4));
  }
  if (body.empty()) syntax(text, "empty query");

  std::vector<std::string> parts;
  if (body.front() == '?') {
    q.direction = Direction::Reverse;
    parts = words_of(body.substr(1));
    if (parts.size() != 2) syntax(text, "expected '? <relation> <word>'");
    q.relation = parts[0];
    q.word = parts[1];
  } else {
    if (body.back() != '?') syntax(text, "expected '<word> <relation>?'");
    parts = words_of(body.substr(0, body.size() - 1));
    if (parts.size() != 2) syntax(text, "expected '<word> <relation>?'");
    q.word = parts[0];
    q.relation = parts[1];
  }
  for (const auto& p : parts) {
    if (p.find('?') != std::string::npos) syntax(text, "misplaced '?'");
  }
  q.word = fold_case(q.word);
  q.relation = fold_case(q.relation);
  return q;
}

std::string to_string(const Query& q) {
  std::string out = q.explicit_mode && q.mode == QueryMode::Semantic ? "sem:" : "";
  if (q.direction == Direction::Forward) return out + q.word + " " + q.relation + "?";
  return out + "? " + q.relation + " " + q.word;
}

std::vector<std::string> AnswerSet::words() const {
  std::vector<std::string> out;
  out.reserve(answers.size());
  for (const auto& a : answers) out.push_back(a.word);
  return out;
}

QueryMode resolve_mode(const Blackboard& bb, const Query& q) {
  if (q.explicit_mode) {
    if (q.mode == QueryMode::Semantic && !bb.lexicon().has_relation_label(q.relation)) {
      throw Error(ErrorCode::UnknownRelation, "no semantic relation labelled '" + q.relation + "'");
    }
    if (q.mode == QueryMode::Episodic && !bb.has_relation(canonical_relation(q.relation))) {
      throw Error(ErrorCode::UnknownRelation, "no blackboard relation '" + q.relation + "'");
    }
    return q.mode;
  }
  if (bb.has_relation(canonical_relation(q.relation))) return QueryMode::Episodic;
  if (bb.lexicon().has_relation_label(q.relation)) return QueryMode::Semantic;
  throw Error(ErrorCode::UnknownRelation, "unknown relation '" + q.relation + "'");
}

AnswerSet run_query(const Blackboard& bb, const Query& q, const QueryOptions& options) {
  const QueryMode mode = resolve_mode(bb, q);
  const LexicalEntry* cue = bb.lexicon().find(q.word);
  if (!cue) throw Error(ErrorCode::UnknownWord, "'" + q.word + "' is not in the lexicon");

  const bool reverse = q.direction == Direction::Reverse;
  const std::string relation = canonical_relation(q.relation);
  const int hops = mode == QueryMode::Episodic ? relation_shape(relation)->path_length + 1 : 1;
  const int budget = options.settle_budget.value_or(std::max(2, 2 * bb.longest_path()));
  if (budget < hops) {
    throw Error(ErrorCode::InvalidConfig, "settle budget " + std::to_string(budget) + " is shorter than the " +
                                              std::to_string(hops) + "-step query path");
  }

  // Private copy: bindings (WM) kept, transient activity and controls cleared.
  const Network& net = bb.network();
  NetworkState s = net.state();
  std::fill(s.controls.begin(), s.controls.end(), 0);
  for (const auto& p : net.populations()) {
    if (p.kind != PopulationKind::WorkingMemory) s.activation[p.id.value] = 0.0;
  }

  net.inject(s, cue->concept_id, 1.0);
  bool cue_answers = false;
  if (mode == QueryMode::Episodic) {
    net.advance(s);
    s.activation[cue->concept_id.value] = 0.0;
    const std::string label = labels::episodic(relation, reverse);
    net.set_control(s, label, true);
    for (int i = 1; i < hops; ++i) net.advance(s);
    net.set_control(s, label, false);
    net.set_control(s, labels::kReadout, true);
    net.advance(s);
    cue_answers = true;
  } else {
    net.set_control(s, labels::semantic(q.relation, reverse), true);
    net.advance(s);
    // The cue's own residual activation is not an answer unless it relates to itself.
    for (const auto& r : bb.lexicon().relations()) {
      cue_answers |= r.label == q.relation && r.subject == cue->word && r.object == cue->word;
    }
  }

  AnswerSet out;
  for (const auto& e : bb.lexicon().entries()) {
    if (&e == cue && !cue_answers) continue;
    const double a = s.activation[e.concept_id.value];
    if (a >= options.readout_threshold) out.answers.push_back(Answer{e.word, a});
  }
  std::sort(out.answers.begin(), out.answers.end(), [](const Answer& a, const Answer& b) {
    if (a.activation != b.activation) return a.activation > b.activation;
    return a.word < b.word;
  });
  return out;
}

AnswerSet run_query(const Blackboard& bb, std::string_view text, const QueryOptions& options) {
  return run_query(bb, parse_query(text), options);
}

void OracleStore::record(Triple triple, QueryMode mode) {
  triple.subject = fold_case(triple.subject);
  triple.object = fold_case(triple.object);
  if (mode == QueryMode::Episodic) triple.relation = canonical_relation(triple.relation);
  triples_.push_back(Entry{std::move(triple), mode});
}

AnswerSet OracleStore::query(const Query& q) const {
  const std::string word = fold_case(q.word);
  const std::string relation = q.mode == QueryMode::Episodic ? canonical_relation(q.relation) : q.relation;
  std::set<std::string> found;
  for (const auto& [t, mode] : triples_) {
    if (mode != q.mode || t.relation != relation) continue;
    if (q.direction == Direction::Forward && t.subject == word) found.insert(t.object);
    if (q.direction == Direction::Reverse && t.object == word) found.insert(t.subject);
  }
  AnswerSet out;
  for (const auto& w : found) out.answers.push_back(Answer{w, 1.0});
  return out;
}

}  // namespace nba
