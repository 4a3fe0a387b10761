#pragma once

#include <initializer_list>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nba/encoder.hpp"
#include "nba/error.hpp"
#include "nba/query.hpp"

namespace testing {

// Code of the nba::Error thrown by fn; std::nullopt when nothing is thrown.
template <typename F>
std::optional<nba::ErrorCode> code_of(F&& fn) {
  try {
    fn();
  } catch (const nba::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct Row {
  std::string form;
  std::string upos;
  int head;
  std::string deprel;
};

inline std::string conllu(const std::vector<Row>& rows) {
  std::string text;
  int id = 1;
  for (const auto& r : rows) {
    text += std::to_string(id++) + "\t" + r.form + "\t_\t" + r.upos + "\t_\t_\t" + std::to_string(r.head) + "\t" +
            r.deprel + "\t_\t_\n";
  }
  return text;
}

inline nba::Sentence sentence(const std::vector<Row>& rows) { return nba::parse_conllu(conllu(rows)); }

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Triples a sentence licenses, read straight off the dependency arcs.
// Kept deliberately separate from the compiler: it knows nothing about hubs,
// slots or instruction order.
inline std::set<nba::Triple> arc_triples(const nba::Sentence& s) {
  std::set<nba::Triple> out;
  auto word = [&](int i) { return lower(s.tokens[i - 1].surface); };
  auto upos = [&](int i) { return s.tokens[i - 1].type; };
  std::map<int, std::vector<const nba::DependencyArc*>> kids;
  for (const auto& a : s.arcs) kids[a.head].push_back(&a);
  for (const auto& a : s.arcs) {
    const std::string& l = a.label;
    if (l == "nsubj" && upos(a.dependent) != nba::WordType::Determiner) {
      out.insert({word(a.dependent), "agent", word(a.head)});
    } else if ((l == "obj" || l == "dobj") && upos(a.dependent) != nba::WordType::Determiner) {
      out.insert({word(a.head), "theme", word(a.dependent)});
    } else if (l == "amod" || l == "flat" || l == "compound") {
      out.insert({word(a.head), "modifier", word(a.dependent)});
    } else if (l == "nmod") {
      for (const auto* k : kids[a.dependent]) {
        if (k->label == "case") out.insert({word(a.head), "prep:" + word(k->dependent), word(a.dependent)});
      }
    } else if (l == "acl:relcl" || l == "acl") {
      out.insert({word(a.head), "clause", word(a.dependent)});
      bool subj = false, obj = false;
      std::string fixed;
      for (const auto* k : kids[a.dependent]) {
        const bool det = upos(k->dependent) == nba::WordType::Determiner;
        if (k->label == "nsubj") {
          if (det) fixed = "agent";
          else subj = true;
        }
        if (k->label == "obj") {
          if (det) fixed = "theme";
          else obj = true;
        }
      }
      std::string role = !fixed.empty() ? fixed : !subj ? "agent" : !obj ? "theme" : "";
      if (role == "agent") out.insert({word(a.head), "agent", word(a.dependent)});
      if (role == "theme") out.insert({word(a.dependent), "theme", word(a.head)});
    }
  }
  return out;
}

struct GeneratedLexicon {
  std::vector<std::string> nouns, verbs, adjectives;
};

inline GeneratedLexicon generate_lexicon(int nouns, int verbs, int adjectives) {
  GeneratedLexicon g;
  for (int i = 0; i < nouns; ++i) g.nouns.push_back("n" + std::to_string(i));
  for (int i = 0; i < verbs; ++i) g.verbs.push_back("v" + std::to_string(i));
  for (int i = 0; i < adjectives; ++i) g.adjectives.push_back("a" + std::to_string(i));
  return g;
}

template <typename Rng>
const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// adj noun verb noun
template <typename Rng>
nba::Sentence random_anvn(const GeneratedLexicon& g, Rng& rng) {
  return sentence({{pick(g.adjectives, rng), "ADJ", 2, "amod"},
                   {pick(g.nouns, rng), "NOUN", 3, "nsubj"},
                   {pick(g.verbs, rng), "VERB", 0, "root"},
                   {pick(g.nouns, rng), "NOUN", 3, "obj"}});
}

// Random tree over a small grammar: [adj*] noun verb [[adj*] noun [prep noun]]
// or a relative clause on the subject. Stays within 8 N-pool tokens.
template <typename Rng>
nba::Sentence random_tree(const GeneratedLexicon& g, Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> adj_count(0, 2);
  std::vector<Row> rows;
  // Heads are patched once positions are known.
  auto noun_phrase = [&](std::vector<int>& adj_rows) {
    for (int k = adj_count(rng); k > 0; --k) {
      adj_rows.push_back(static_cast<int>(rows.size()));
      rows.push_back({pick(g.adjectives, rng), "ADJ", 0, "amod"});
    }
    rows.push_back({pick(g.nouns, rng), "NOUN", 0, ""});
    return static_cast<int>(rows.size());  // 1-based id of the noun
  };
  std::vector<int> subj_adjs;
  int subj = noun_phrase(subj_adjs);
  for (int r : subj_adjs) rows[r].head = subj;

  if (coin(rng) && coin(rng)) {
    // subject relative clause: "n that v n"
    rows.push_back({"that", "DET", 0, "nsubj"});
    int that = static_cast<int>(rows.size());
    rows.push_back({pick(g.verbs, rng), "VERB", subj, "acl:relcl"});
    int rv = static_cast<int>(rows.size());
    rows[that - 1].head = rv;
    rows.push_back({pick(g.nouns, rng), "NOUN", rv, "obj"});
  }
  rows.push_back({pick(g.verbs, rng), "VERB", 0, "root"});
  int verb = static_cast<int>(rows.size());
  rows[subj - 1].head = verb;
  rows[subj - 1].deprel = "nsubj";
  if (coin(rng)) {
    std::vector<int> obj_adjs;
    int obj = noun_phrase(obj_adjs);
    for (int r : obj_adjs) rows[r].head = obj;
    rows[obj - 1].head = verb;
    rows[obj - 1].deprel = "obj";
    if (coin(rng)) {
      static const std::vector<std::string> preps{"of", "in", "with"};
      rows.push_back({pick(preps, rng), "ADP", 0, "case"});
      int p = static_cast<int>(rows.size());
      rows.push_back({pick(g.nouns, rng), "NOUN", obj, "nmod"});
      rows[p - 1].head = static_cast<int>(rows.size());
    }
  }
  return sentence(rows);
}

inline std::vector<std::string> relations_of(const std::set<nba::Triple>& triples) {
  std::set<std::string> r;
  for (const auto& t : triples) r.insert(t.relation);
  return {r.begin(), r.end()};
}

}  // namespace testing
