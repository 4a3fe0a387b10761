#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nba/blackboard.hpp"
#include "nba/config.hpp"
#include "nba/demos.hpp"
#include "nba/encoder.hpp"
#include "nba/error.hpp"
#include "nba/query.hpp"
#include "nba/trace.hpp"

namespace nba::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::StateFormat, path + ": " + e.what());
  }
}

Config read_config(const std::string& path) { return path.empty() ? Config{} : load_config(read_file(path)); }

LexiconFile read_lexicon(const std::string& lexicon, const std::vector<std::string>& relations) {
  LexiconFile file = lexicon.empty() ? LexiconFile{} : parse_lexicon(read_file(lexicon));
  for (const auto& path : relations) {
    for (auto& r : parse_semantic_relations(read_file(path))) file.relations.push_back(std::move(r));
  }
  return file;
}

std::unique_ptr<Blackboard> open_board(const std::string& state, const Config& config, const LexiconFile& extra) {
  std::unique_ptr<Blackboard> bb;
  if (state.empty()) {
    bb = std::make_unique<Blackboard>(config.board, extra);
    return bb;
  }
  bb = std::make_unique<Blackboard>(Blackboard::restore(read_json(state)));
  for (const auto& w : extra.words) {
    if (!bb->lexicon().contains(w.word)) bb->add_word(w.word, w.type);
  }
  for (const auto& r : extra.relations) bb->add_semantic_relation(r.subject, r.label, r.object);
  return bb;
}

std::vector<Sentence> read_sentences(const std::vector<std::string>& paths) {
  std::vector<Sentence> out;
  for (const auto& p : paths) {
    for (auto& s : parse_conllu_document(read_file(p))) out.push_back(std::move(s));
  }
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string format_answer(const AnswerSet& a, bool activations) {
  if (!activations) return join(a.words());
  std::ostringstream out;
  for (std::size_t i = 0; i < a.answers.size(); ++i) {
    out << (i ? " " : "") << a.answers[i].word << ":" << a.answers[i].activation;
  }
  return out.str();
}

void print_demo(const DemoResult& d, std::ostream& out) {
  out << "== " << d.name << ": " << d.description << "\n";
  for (const auto& q : d.queries) {
    out << "  " << q.text << " -> {" << join(q.actual) << "}";
    if (!q.ok()) out << "  MISMATCH, expected {" << join(q.expected) << "}";
    out << "\n";
  }
  for (const auto& p : d.patterns) {
    out << "  [" << p.phrase << "] span " << p.span.start << ".." << p.span.end << " rose=" << p.report.rose
        << " declined=" << p.report.declined << " peak=" << p.report.peak_activity
        << " after=" << p.report.after_close_activity << (p.ok() ? "" : "  MISMATCH") << "\n";
  }
}

const char* status_name(HubStatus s) {
  switch (s) {
    case HubStatus::Free: return "free";
    case HubStatus::Reserved: return "reserved";
    case HubStatus::Bound: return "bound";
  }
  return "?";
}

void show_state(const Blackboard& bb, std::ostream& out) {
  const auto& c = bb.config();
  out << "pools: N=" << c.k_n << " V=" << c.k_v << " C=" << c.k_c << "\n";
  out << "words: " << bb.lexicon().size() << ", semantic relations: " << bb.lexicon().relations().size() << "\n";
  out << "connections: " << bb.connection_count() << " (" << bb.concept_hub_connection_count() << " word-hub, "
      << bb.matrix_connection_count() << " matrix)\n";
  out << "time: " << bb.network().state().time << "\n";
  for (const auto& h : bb.hubs()) {
    if (h.status == HubStatus::Free) continue;
    out << "hub " << to_string(h.hub) << " " << status_name(h.status);
    if (!h.word.empty()) out << " " << h.word;
    out << "\n";
  }
  for (BindingId id : bb.active_bindings()) {
    const Binding& b = bb.binding(id);
    if (b.kind == BindingKind::Concept) {
      out << "bind " << b.word << " -> " << to_string(b.hub) << "\n";
    } else {
      out << "cell " << to_string(b.hub) << " -" << b.relation << "-> " << to_string(b.to) << "\n";
    }
  }
}

struct Repl {
  Config config;
  std::unique_ptr<Blackboard> board;

  // Returns false on :quit.
  bool handle(const std::string& line, std::ostream& out, std::ostream& err) {
    std::istringstream words(line);
    std::string head;
    words >> head;
    if (head.empty()) return true;
    try {
      if (head == ":quit" || head == ":q") return false;
      if (head == ":load") {
        std::string path;
        words >> path;
        if (path.empty()) throw Error(ErrorCode::InvalidArgument, ":load needs a state file");
        board = std::make_unique<Blackboard>(Blackboard::restore(read_json(path)));
        out << "loaded " << path << "\n";
      } else if (head == ":release-all") {
        board->release_all();
        out << "released\n";
      } else if (head.front() == ':') {
        err << "unknown command " << head << " (:load FILE, :release-all, :quit)\n";
      } else {
        out << format_answer(run_query(*board, line, config.query_options()), false) << "\n";
      }
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    }
    return true;
  }
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural blackboard: encode dependency parses and query them through gated activation", "nba"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  // lexicon check
  auto* lexicon_cmd = app.add_subcommand("lexicon", "Lexicon tools");
  lexicon_cmd->require_subcommand(1);
  auto* check_cmd = lexicon_cmd->add_subcommand("check", "Validate a lexicon file");
  std::string check_path;
  std::vector<std::string> check_relations;
  check_cmd->add_option("file", check_path, "Lexicon TSV")->required();
  check_cmd->add_option("--relations", check_relations, "Semantic relation TSV files");

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Encode CoNLL-U sentences onto a blackboard");
  std::string lexicon_path;
  std::vector<std::string> relation_paths;
  std::vector<std::string> sentence_paths;
  std::string state_out;
  std::string state_in;
  bool release_between = false;
  encode_cmd->add_option("--lexicon", lexicon_path, "Lexicon TSV");
  encode_cmd->add_option("--relations", relation_paths, "Semantic relation TSV files");
  encode_cmd->add_option("--sentence,--sentences", sentence_paths, "CoNLL-U files")->required();
  encode_cmd->add_option("--in-state", state_in, "Start from this snapshot");
  encode_cmd->add_option("--state", state_out, "Write the snapshot here")->required();
  encode_cmd->add_flag("--release-between", release_between, "Release all bindings before each sentence");

  // query
  auto* query_cmd = app.add_subcommand("query", "Answer queries against a snapshot");
  std::string query_state;
  std::vector<std::string> queries;
  bool activations = false;
  query_cmd->add_option("--state", query_state, "Snapshot file")->required();
  query_cmd->add_option("queries", queries, "Queries such as \"cat do?\" or \"? do run\"")->required();
  query_cmd->add_flag("--activations", activations, "Print word:activation pairs");

  // repl
  auto* repl_cmd = app.add_subcommand("repl", "Interactive query loop");
  std::string repl_state;
  repl_cmd->add_option("--state", repl_state, "Snapshot to load first");

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "Record aggregate activity while encoding");
  std::string trace_lexicon;
  std::vector<std::string> trace_sentences;
  std::string trace_format = "csv";
  std::string trace_out;
  trace_cmd->add_option("--lexicon", trace_lexicon, "Lexicon TSV");
  trace_cmd->add_option("--sentence,--sentences", trace_sentences, "CoNLL-U files")->required();
  trace_cmd->add_option("--format", trace_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  trace_cmd->add_option("--out", trace_out, "Output file (default stdout)");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "Run a built-in scenario and check its answers");
  std::string demo_name;
  std::string demo_state;
  std::vector<std::string> demo_choices = demo_names();
  demo_choices.push_back("all");
  demo_cmd->add_option("name", demo_name, "Demo name or all")->required()->check(CLI::IsMember(demo_choices));
  demo_cmd->add_option("--state", demo_state, "Write the demo's blackboard snapshot here");

  // state show
  auto* state_cmd = app.add_subcommand("state", "Snapshot tools");
  state_cmd->require_subcommand(1);
  auto* show_cmd = state_cmd->add_subcommand("show", "Summarize a snapshot");
  std::string show_path;
  show_cmd->add_option("file", show_path, "Snapshot file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Config config = read_config(config_path);

    if (*check_cmd) {
      LexiconFile file = read_lexicon(check_path, check_relations);
      Blackboard bb(config.board, file);
      out << file.words.size() << " words, " << file.relations.size() << " semantic relations, "
          << bb.connection_count() << " blackboard connections\n";
      return kOk;
    }

    if (*encode_cmd) {
      auto bb = open_board(state_in, config, read_lexicon(lexicon_path, relation_paths));
      std::size_t n = 0;
      for (const auto& s : read_sentences(sentence_paths)) {
        if (release_between) bb->release_all();
        auto program = compile(s, config.label_map, config.compile_options(*bb));
        execute(program, *bb, config.execute_options());
        ++n;
      }
      write_file(state_out, bb->snapshot().dump(2) + "\n");
      out << "encoded " << n << " sentence" << (n == 1 ? "" : "s") << ", " << bb->active_bindings().size()
          << " active bindings -> " << state_out << "\n";
      return kOk;
    }

    if (*query_cmd) {
      Blackboard bb = Blackboard::restore(read_json(query_state));
      for (const auto& q : queries) out << format_answer(run_query(bb, q, config.query_options()), activations) << "\n";
      return kOk;
    }

    if (*repl_cmd) {
      Repl repl{config, repl_state.empty() ? std::make_unique<Blackboard>(config.board)
                                           : std::make_unique<Blackboard>(Blackboard::restore(read_json(repl_state)))};
      for (std::string line; std::getline(in, line);) {
        if (!repl.handle(line, out, err)) break;
      }
      return kOk;
    }

    if (*trace_cmd) {
      auto bb = open_board({}, config, read_lexicon(trace_lexicon, {}));
      ActivityTrace all;
      for (const auto& s : read_sentences(trace_sentences)) {
        auto program = compile(s, config.label_map, config.compile_options(*bb));
        auto [report, trace] = trace_encode(program, *bb, config.execute_options());
        for (const auto& sample : trace.samples) {
          if (all.samples.empty() || sample.step > all.samples.back().step) all.samples.push_back(sample);
        }
        all.markers.insert(all.markers.end(), trace.markers.begin(), trace.markers.end());
        for (const auto& span : trace.spans) {
          auto r = detect_rise_decline(trace, span);
          err << "span " << span.start << ".." << span.end << " rose=" << r.rose << " declined=" << r.declined << "\n";
        }
        all.spans.insert(all.spans.end(), trace.spans.begin(), trace.spans.end());
      }
      std::string text = trace_format == "csv" ? export_csv(all) : export_json(all).dump(2) + "\n";
      if (trace_out.empty()) {
        out << text;
      } else {
        write_file(trace_out, text);
      }
      return kOk;
    }

    if (*demo_cmd) {
      std::vector<std::string> names = demo_name == "all" ? demo_names() : std::vector<std::string>{demo_name};
      bool ok = true;
      for (const auto& name : names) {
        DemoResult d = run_demo(name);
        print_demo(d, out);
        ok &= d.passed();
        if (!demo_state.empty() && names.size() == 1) write_file(demo_state, d.board->snapshot().dump(2) + "\n");
      }
      return ok ? kOk : kDemoMismatch;
    }

    if (*show_cmd) {
      show_state(Blackboard::restore(read_json(show_path)), out);
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsage;
}

}  // namespace nba::cli
