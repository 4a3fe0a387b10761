#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nba/blackboard.hpp"

namespace nba {

enum class Direction { Forward, Reverse };
enum class QueryMode { Episodic, Semantic };

struct Query {
  // Known side of the query; the other side is the wildcard.
  std::string word;
  std::string relation;
  Direction direction = Direction::Forward;
  QueryMode mode = QueryMode::Episodic;
  // Set when the text carried `sem:`; otherwise the mode is resolved
  // against the blackboard at run time.
  bool explicit_mode = false;
  friend bool operator==(const Query&, const Query&) = default;
};

// "cat do?", "? do run", "sem:cat do?". Throws QuerySyntaxError.
Query parse_query(std::string_view text);
std::string to_string(const Query& query);

struct Answer {
  std::string word;
  double activation = 0.0;
  friend bool operator==(const Answer&, const Answer&) = default;
};

struct AnswerSet {
  // Descending activation, then word.
  std::vector<Answer> answers;

  std::vector<std::string> words() const;
  bool empty() const { return answers.empty(); }
  friend bool operator==(const AnswerSet&, const AnswerSet&) = default;
};

struct QueryOptions {
  double readout_threshold = 0.5;
  // Maximum propagation steps; defaults to twice the longest hub path.
  std::optional<int> settle_budget;
};

// Mode the query runs in on this blackboard; throws UnknownRelation.
QueryMode resolve_mode(const Blackboard& blackboard, const Query& query);

// Runs the query on a private copy of the blackboard state; the blackboard
// itself is untouched. Throws UnknownWord, UnknownRelation, InvalidConfig.
AnswerSet run_query(const Blackboard& blackboard, const Query& query, const QueryOptions& options = {});
AnswerSet run_query(const Blackboard& blackboard, std::string_view text, const QueryOptions& options = {});

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Brute-force symbolic reference: a set of triples answered by linear scan.
class OracleStore {
 public:
  void record(Triple triple, QueryMode mode);
  // Uses query.mode as given; episodic relations are compared after alias
  // resolution ("do" == "agent").
  AnswerSet query(const Query& query) const;
  std::size_t size() const { return triples_.size(); }
  void clear() { triples_.clear(); }

 private:
  struct Entry {
    Triple triple;
    QueryMode mode;
  };
  std::vector<Entry> triples_;
};

}  // namespace nba
