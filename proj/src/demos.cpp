#include "nba/demos.hpp"

#include <algorithm>
#include <initializer_list>

#include "nba/encoder.hpp"
#include "nba/error.hpp"
#include "nba/query.hpp"

namespace nba {

namespace {

struct Row {
  const char* form;
  const char* upos;
  int head;
  const char* deprel;
};

Sentence sentence(std::initializer_list<Row> rows) {
  std::string text;
  int id = 1;
  for (const auto& r : rows) {
    text += std::to_string(id++) + "\t" + r.form + "\t_\t" + r.upos + "\t_\t_\t" + std::to_string(r.head) + "\t" +
            r.deprel + "\t_\t_\n";
  }
  return parse_conllu(text);
}

void encode(Blackboard& bb, const Sentence& s) {
  execute(compile(s, default_relation_map(), compile_options_for(bb)), bb);
}

void ask(DemoResult& demo, std::string text, std::vector<std::string> expected) {
  demo.queries.push_back(DemoQuery{std::move(text), std::move(expected), {}});
}

void answer_all(DemoResult& demo) {
  demo.queries = rerun_queries(demo, *demo.board);
}

DemoResult fig1a() {
  DemoResult d{"fig1a", "semantic memory: cat has? and cat can?", {}, {}, {}, {}};
  d.board = std::make_unique<Blackboard>(BlackboardConfig{}, parse_lexicon("cat\tN\npaw\tN\npurr\tV\n"
                                                                           "cat\thas\tpaw\ncat\tcan\tpurr\n"));
  ask(d, "cat has?", {"paw"});
  ask(d, "cat can?", {"purr"});
  ask(d, "? has paw", {"cat"});
  return d;
}

DemoResult fig1b() {
  DemoResult d{"fig1b", "semantic do: what cats do in general", {}, {}, {}, {}};
  d.board = std::make_unique<Blackboard>(
      BlackboardConfig{}, parse_lexicon("cat\tN\nrun\tV\neat\tV\ncat\tdo\trun\ncat\tdo\teat\n"));
  ask(d, "sem:cat do?", {"eat", "run"});
  ask(d, "sem:? do run", {"cat"});
  return d;
}

DemoResult fig1d() {
  DemoResult d{"fig1d", "blackboard binding cat-N0, run-V0, agent cell; selective and reverse do", {}, {}, {}, {}};
  d.board = std::make_unique<Blackboard>(
      BlackboardConfig{}, parse_lexicon("cat\tN\ndog\tN\nrun\tV\neat\tV\ncat\tdo\trun\ncat\tdo\teat\n"));
  Blackboard& bb = *d.board;
  const HubRef n0{PoolKind::N, 0};
  const HubRef v0{PoolKind::V, 0};
  bb.bind_concept("cat", n0);
  bb.bind_concept("run", v0);
  bb.bind_hubs(n0, v0, "agent");
  ask(d, "cat do?", {"run"});
  ask(d, "sem:cat do?", {"eat", "run"});
  ask(d, "? do run", {"cat"});
  ask(d, "dog do?", {});
  return d;
}

DemoResult fig1e() {
  DemoResult d{"fig1e", "two sentences on one blackboard: cat runs, dog eats", {}, {}, {}, {}};
  d.board = std::make_unique<Blackboard>();
  encode(*d.board, sentence({{"cat", "NOUN", 2, "nsubj"}, {"runs", "VERB", 0, "root"}}));
  encode(*d.board, sentence({{"dog", "NOUN", 2, "nsubj"}, {"eats", "VERB", 0, "root"}}));
  ask(d, "cat do?", {"runs"});
  ask(d, "dog do?", {"eats"});
  ask(d, "? do runs", {"cat"});
  ask(d, "? do eats", {"dog"});
  return d;
}

DemoResult fig1f() {
  DemoResult d{"fig1f", "clause embedding: the dog that the cat chases eats", {}, {}, {}, {}};
  d.board = std::make_unique<Blackboard>();
  encode(*d.board, sentence({{"the", "DET", 2, "det"},
                             {"dog", "NOUN", 7, "nsubj"},
                             {"that", "DET", 6, "obj"},
                             {"the", "DET", 5, "det"},
                             {"cat", "NOUN", 6, "nsubj"},
                             {"chases", "VERB", 2, "acl:relcl"},
                             {"eats", "VERB", 0, "root"}}));
  ask(d, "dog do?", {"eats"});
  ask(d, "cat do?", {"chases"});
  ask(d, "chases theme?", {"dog"});
  ask(d, "dog clause?", {"chases"});
  ask(d, "? clause chases", {"dog"});
  return d;
}

DemoResult reporter() {
  DemoResult d{"reporter", "double role: the reporter that the senator attacked admitted the error", {}, {}, {}, {}};
  d.board = std::make_unique<Blackboard>();
  encode(*d.board, sentence({{"the", "DET", 2, "det"},
                             {"reporter", "NOUN", 7, "nsubj"},
                             {"that", "DET", 6, "obj"},
                             {"the", "DET", 5, "det"},
                             {"senator", "NOUN", 6, "nsubj"},
                             {"attacked", "VERB", 2, "acl:relcl"},
                             {"admitted", "VERB", 0, "root"},
                             {"the", "DET", 9, "det"},
                             {"error", "NOUN", 7, "obj"}}));
  ask(d, "? agent admitted", {"reporter"});
  ask(d, "attacked theme?", {"reporter"});
  ask(d, "? agent attacked", {"senator"});
  ask(d, "admitted theme?", {"error"});
  ask(d, "reporter agent?", {"admitted"});
  ask(d, "? theme reporter", {"attacked"});
  return d;
}

DemoResult nelson() {
  DemoResult d{"nelson", "constituent activity: ten sad students (of Bill Gates)", {}, {}, {}, {}};
  struct Phrase {
    std::string text;
    Sentence sentence;
    std::vector<std::pair<int, int>> spans;
  };
  std::vector<Phrase> phrases;
  phrases.push_back({"ten sad students",
                     sentence({{"ten", "ADJ", 3, "amod"}, {"sad", "ADJ", 3, "amod"}, {"students", "NOUN", 0, "root"}}),
                     {{1, 3}}});
  phrases.push_back({"ten sad students of Bill Gates",
                     sentence({{"ten", "ADJ", 3, "amod"},
                               {"sad", "ADJ", 3, "amod"},
                               {"students", "NOUN", 0, "root"},
                               {"of", "ADP", 5, "case"},
                               {"Bill", "PROPN", 3, "nmod"},
                               {"Gates", "PROPN", 5, "flat"}}),
                     {{1, 3}, {1, 6}}});

  for (const auto& p : phrases) {
    d.board = std::make_unique<Blackboard>();
    auto program = compile(p.sentence, default_relation_map(), compile_options_for(*d.board));
    auto [report, trace] = trace_encode(program, *d.board);
    for (auto [start, end] : p.spans) {
      auto it = std::find_if(trace.spans.begin(), trace.spans.end(),
                             [&](const TraceSpan& s) { return s.start == start && s.end == end; });
      if (it == trace.spans.end()) {
        throw Error(ErrorCode::SpanNotClosed, "no span " + std::to_string(start) + ".." + std::to_string(end));
      }
      d.patterns.push_back(DemoPattern{p.text, *it, detect_rise_decline(trace, *it)});
    }
    d.traces.push_back(std::move(trace));
  }
  // The board keeps the longer phrase.
  ask(d, "students modifier?", {"sad", "ten"});
  ask(d, "students prep:of?", {"bill"});
  ask(d, "bill modifier?", {"gates"});
  return d;
}

}  // namespace

bool DemoResult::passed() const {
  return std::all_of(queries.begin(), queries.end(), [](const DemoQuery& q) { return q.ok(); }) &&
         std::all_of(patterns.begin(), patterns.end(), [](const DemoPattern& p) { return p.ok(); });
}

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"fig1a", "fig1b", "fig1d", "fig1e", "fig1f", "reporter", "nelson"};
  return names;
}

DemoResult run_demo(std::string_view name) {
  DemoResult d;
  if (name == "fig1a") d = fig1a();
  else if (name == "fig1b") d = fig1b();
  else if (name == "fig1d") d = fig1d();
  else if (name == "fig1e") d = fig1e();
  else if (name == "fig1f") d = fig1f();
  else if (name == "reporter") d = reporter();
  else if (name == "nelson") d = nelson();
  else throw Error(ErrorCode::InvalidArgument, "unknown demo '" + std::string(name) + "'");
  answer_all(d);
  return d;
}

std::vector<DemoQuery> rerun_queries(const DemoResult& demo, const Blackboard& board) {
  std::vector<DemoQuery> out = demo.queries;
  for (auto& q : out) q.actual = run_query(board, q.text).words();
  return out;
}

}  // namespace nba
