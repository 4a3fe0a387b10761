// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "nba/blackboard.hpp"
#include "nba/demos.hpp"
#include "nba/encoder.hpp"
#include "nba/error.hpp"
#include "nba/query.hpp"
#include "nba/trace.hpp"
#include "support.hpp"

using namespace nba;

namespace {

using Clock = std::chrono::steady_clock;
using Words = std::vector<std::string>;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

void encode(Blackboard& bb, const Sentence& s) {
  execute(compile(s, default_relation_map(), compile_options_for(bb)), bb);
}

Words ask(const Blackboard& bb, std::string_view q) { return run_query(bb, q).words(); }

// 1 -------------------------------------------------------------------------

const Words kScenarioDemos{"fig1a", "fig1b", "fig1d", "fig1e", "fig1f"};

Outcome demo_scenarios() {
  auto t0 = Clock::now();
  int queries = 0;
  std::string failed;
  for (const auto& name : kScenarioDemos) {
    DemoResult d = run_demo(name);
    queries += static_cast<int>(d.queries.size());
    if (!d.passed()) failed += " " + name;
  }
  const double dt = seconds_since(t0);
  std::ostringstream out;
  out << queries << " queries over " << kScenarioDemos.size() << " demos in " << dt << " s (limit 1 s)";
  if (!failed.empty()) out << "; mismatches in" << failed;
  return {failed.empty() && dt < 1.0, out.str()};
}

// 2 -------------------------------------------------------------------------

Outcome productivity() {
  auto g = testing::generate_lexicon(100, 100, 100);
  LexiconFile lex;
  for (const auto& w : g.nouns) lex.words.push_back({w, WordType::Noun});
  for (const auto& w : g.verbs) lex.words.push_back({w, WordType::Verb});
  for (const auto& w : g.adjectives) lex.words.push_back({w, WordType::Adjective});
  Blackboard bb({}, lex);

  std::mt19937_64 rng(2024);
  const Words relations{"agent", "theme", "modifier"};
  long checked = 0;
  long disagreements = 0;
  std::string first_failure;
  std::set<std::string> distinct;

  auto t0 = Clock::now();
  for (int i = 0; i < 10000; ++i) {
    bb.release_all();
    Sentence s = testing::random_anvn(g, rng);
    encode(bb, s);
    std::string text;
    for (const auto& t : s.tokens) text += t.surface + " ";
    distinct.insert(text);

    OracleStore oracle;
    for (const auto& t : testing::arc_triples(s)) oracle.record(t, QueryMode::Episodic);
    Words cues;
    for (const auto& t : s.tokens) cues.push_back(t.surface);
    cues.push_back(testing::pick(g.nouns, rng));  // usually absent from the sentence
    for (const auto& w : cues) {
      for (const auto& r : relations) {
        for (auto dir : {Direction::Forward, Direction::Reverse}) {
          Query q{w, r, dir, QueryMode::Episodic, true};
          ++checked;
          if (run_query(bb, q) != oracle.query(q)) {
            if (++disagreements == 1) first_failure = text + "/ " + to_string(q);
          }
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream out;
  out << checked << " queries over 10000 sentences (" << distinct.size() << " distinct), " << disagreements
      << " disagreements, " << dt << " s (limit 30 s)";
  if (disagreements) out << "; first: " << first_failure;
  return {disagreements == 0 && dt < 30.0, out.str()};
}

// 3 -------------------------------------------------------------------------

Outcome systematicity() {
  auto encoded = [](const char* subj, const char* obj) {
    Blackboard bb;
    encode(bb, testing::sentence({{subj, "NOUN", 2, "nsubj"}, {"rides", "VERB", 0, "root"}, {obj, "NOUN", 2, "obj"}}));
    return std::pair{ask(bb, "? agent rides"), ask(bb, "rides theme?")};
  };
  auto [agent1, theme1] = encoded("astronaut", "horse");
  auto [agent2, theme2] = encoded("horse", "astronaut");
  const bool ok = agent1 == Words{"astronaut"} && theme1 == Words{"horse"} && agent2 == theme1 && theme2 == agent1;
  std::ostringstream out;
  out << "astronaut rides horse: agent {" << agent1.at(0) << "} theme {" << theme1.at(0)
      << "}; horse rides astronaut: agent {" << agent2.at(0) << "} theme {" << theme2.at(0) << "}";
  return {ok, out.str()};
}

// 4 -------------------------------------------------------------------------

Outcome double_role() {
  Blackboard bb;
  encode(bb, testing::sentence({{"the", "DET", 2, "det"},
                                {"reporter", "NOUN", 7, "nsubj"},
                                {"that", "DET", 6, "obj"},
                                {"the", "DET", 5, "det"},
                                {"senator", "NOUN", 6, "nsubj"},
                                {"attacked", "VERB", 2, "acl:relcl"},
                                {"admitted", "VERB", 0, "root"},
                                {"the", "DET", 9, "det"},
                                {"error", "NOUN", 7, "obj"}}));
  auto contains = [](const Words& w, const char* x) { return std::find(w.begin(), w.end(), x) != w.end(); };
  auto agents = ask(bb, "? agent admitted");
  auto themes = ask(bb, "attacked theme?");
  const bool ok = contains(agents, "reporter") && contains(themes, "reporter");
  return {ok, "agent-of(admitted) = {" + (agents.empty() ? "" : agents[0]) + "}, theme-of(attacked) = {" +
                  (themes.empty() ? "" : themes[0]) + "}, one blackboard state"};
}

// 5 -------------------------------------------------------------------------

Outcome constituent_trace() {
  DemoResult d = run_demo("nelson");
  std::ostringstream out;
  int flags = 0;
  int total = 0;
  for (const auto& p : d.patterns) {
    flags += p.report.rose + p.report.declined;
    total += 2;
    out << "[" << p.phrase << " " << p.span.start << ".." << p.span.end << " rose=" << p.report.rose
        << " declined=" << p.report.declined << " peak@" << p.report.peak_step << "] ";
  }
  // The long phrase must peak twice: once per constituent.
  bool distinct_peaks = d.patterns.size() == 3 && d.patterns[1].report.peak_step != d.patterns[2].report.peak_step;
  out << flags << "/" << total << " flags";
  return {total == 6 && flags == total && distinct_peaks, out.str()};
}

// 6 -------------------------------------------------------------------------

Outcome scaling() {
  BlackboardConfig c;
  c.k_n = 4;
  c.k_v = 4;
  c.relations = {"agent", "theme"};
  std::vector<int> sizes{10, 100, 1000};
  std::vector<double> counts;
  std::vector<long> expressible;
  for (int size : sizes) {
    LexiconFile lex;
    for (int i = 0; i < size / 2; ++i) lex.words.push_back({"n" + std::to_string(i), WordType::Noun});
    for (int i = 0; i < size / 2; ++i) lex.words.push_back({"v" + std::to_string(i), WordType::Verb});
    Blackboard bb(c, lex);
    counts.push_back(static_cast<double>(bb.connection_count()));

    // A noun-verb pair is expressible when some N hub the noun can bind to
    // reaches some V hub the verb can bind to through an agent cell.
    long pairs = 0;
    for (int n = 0; n < size / 2; ++n) {
      for (int v = 0; v < size / 2; ++v) {
        bool found = false;
        for (int i = 0; i < c.k_n && !found; ++i) {
          HubRef hn{PoolKind::N, i};
          if (!bb.link_wm("n" + std::to_string(n), hn)) continue;
          for (int j = 0; j < c.k_v && !found; ++j) {
            HubRef hv{PoolKind::V, j};
            found = bb.link_wm("v" + std::to_string(v), hv) && bb.find_cell(hn, hv, "agent");
          }
        }
        pairs += found;
      }
    }
    expressible.push_back(pairs);
  }
  const double slope_low = (counts[1] - counts[0]) / (sizes[1] - sizes[0]);
  const double slope_high = (counts[2] - counts[1]) / (sizes[2] - sizes[1]);
  const double deviation = std::abs(slope_high - slope_low) / slope_low;
  bool product = true;
  for (std::size_t i = 0; i < sizes.size(); ++i) product &= expressible[i] == long(sizes[i] / 2) * (sizes[i] / 2);
  std::ostringstream out;
  out << "connections " << counts[0] << "/" << counts[1] << "/" << counts[2] << ", slope deviation " << deviation * 100
      << "% (limit 5%), expressible noun-verb pairs " << expressible[0] << "/" << expressible[1] << "/"
      << expressible[2] << " (= nouns x verbs: " << (product ? "yes" : "no") << ")";
  return {deviation <= 0.05 && product, out.str()};
}

// 7 -------------------------------------------------------------------------

struct RandomNet {
  Network net;
  std::vector<std::string> labels{"a", "b", "c"};
};

RandomNet random_network(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomNet r{Network(DynamicsParams{unit(rng), unit(rng), unit(rng), unit(rng), 0})};
  const int n = std::uniform_int_distribution<int>(2, 40)(rng);
  std::vector<PopulationId> pops;
  for (int i = 0; i < n; ++i) {
    auto kind = static_cast<PopulationKind>(std::uniform_int_distribution<int>(0, 3)(rng));
    pops.push_back(kind == PopulationKind::Control ? r.net.add_control_population(r.labels[i % 3])
                                                   : r.net.add_population(kind, 0.05 + 0.9 * unit(rng)));
  }
  std::uniform_int_distribution<std::size_t> any(0, pops.size() - 1);
  const int m = std::uniform_int_distribution<int>(0, 4 * n)(rng);
  for (int i = 0; i < m; ++i) {
    Gate g;
    if (unit(rng) < 0.6) g.control = r.labels[any(rng) % 3];
    if (unit(rng) < 0.5) g.binding = pops[any(rng)];
    r.net.add_gated_connection(pops[any(rng)], pops[any(rng)], g, 0.05 + 2.0 * unit(rng));
  }
  for (auto id : pops) {
    if (unit(rng) < 0.5) r.net.inject(id, unit(rng));
  }
  for (const auto& l : r.labels) r.net.set_control(l, unit(rng) < 0.5);
  return r;
}

// Next activations computed from the update rule, summing only connections
// whose gates are open.
std::vector<double> reference_step(const Network& net) {
  const auto& s = net.state();
  std::vector<double> input(net.population_count(), 0.0);
  for (const auto& c : net.connections()) {
    bool open = true;
    if (c.gate.control) open &= net.control_asserted(*c.gate.control);
    if (c.gate.binding) open &= s.activation[c.gate.binding->value] >= net.population(*c.gate.binding).sustain_threshold;
    if (open) input[c.target.value] += c.gain * s.activation[c.source.value];
  }
  std::vector<double> next(input.size());
  for (const auto& p : net.populations()) {
    const auto i = p.id.value;
    double u = input[i];
    if (p.kind == PopulationKind::Control && net.control_asserted(p.control_label)) u += 1.0;
    double a = std::clamp(net.params().decay_for(p.kind) * s.activation[i] + u, 0.0, 1.0);
    if (p.kind == PopulationKind::WorkingMemory && s.sustained[i]) a = std::max(a, p.sustain_threshold);
    next[i] = a;
  }
  return next;
}

Outcome dynamics_suite() {
  const int trials = 200;
  int isolation = 0, bounded = 0, persistence = 0, determinism = 0, truth_table = 0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int t = 0; t < trials; ++t) {
    auto r = random_network(rng);
    for (int s = 0; s < 10; ++s) {
      auto want = reference_step(r.net);
      r.net.step();
      for (std::size_t i = 0; i < want.size(); ++i) {
        if (std::abs(want[i] - r.net.state().activation[i]) > 1e-12) {
          ++isolation;
          break;
        }
      }
    }
  }
  for (int t = 0; t < trials; ++t) {
    auto r = random_network(rng);
    for (int s = 0; s < 100; ++s) {
      r.net.step();
      for (double a : r.net.state().activation) {
        if (!(a >= 0.0 && a <= 1.0)) {
          ++bounded;
          s = 100;
          break;
        }
      }
    }
  }
  for (int t = 0; t < trials; ++t) {
    Network net(DynamicsParams{0, 0, 0, unit(rng), 0});
    const double thr = 0.05 + 0.9 * unit(rng);
    auto wm = net.add_population(PopulationKind::WorkingMemory, thr);
    net.inject(wm, thr + (1 - thr) * unit(rng));
    for (int s = 0; s < 1000; ++s) {
      net.step();
      if (net.activation(wm) < thr) {
        ++persistence;
        break;
      }
    }
  }
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 a(9000 + t), b(9000 + t);
    auto ra = random_network(a);
    auto rb = random_network(b);
    for (int s = 0; s < 50; ++s) {
      ra.net.step();
      rb.net.step();
    }
    determinism += !(ra.net.state() == rb.net.state());
  }
  for (int t = 0; t < trials; ++t) {
    Network net;
    auto src = net.add_population(PopulationKind::Hub);
    auto dst = net.add_population(PopulationKind::Hub);
    const double thr = 0.05 + 0.9 * unit(rng);
    auto wm = net.add_population(PopulationKind::WorkingMemory, thr);
    auto c = net.add_gated_connection(src, dst, Gate::dual(wm, "rel"));
    const bool label = unit(rng) < 0.5;
    const double level = unit(rng) < 0.5 ? thr + (1 - thr) * unit(rng) : thr * unit(rng) * 0.999;
    net.set_control("rel", label);
    net.inject(wm, level);
    net.inject(src, 1.0);
    const bool expect = label && level >= thr;
    net.step();
    truth_table += net.gate_open(c) != (label && net.activation(wm) >= thr) || (net.activation(dst) == 1.0) != expect;
  }

  std::ostringstream out;
  out << trials << " instances each; violations: closed-gate isolation " << isolation << ", boundedness " << bounded
      << ", WM persistence (1000 steps) " << persistence << ", determinism " << determinism << ", dual-gate truth table "
      << truth_table;
  return {isolation + bounded + persistence + determinism + truth_table == 0, out.str()};
}

// 8 -------------------------------------------------------------------------

Outcome resources() {
  BlackboardConfig c;
  c.k_n = 2;
  auto three_nouns = testing::sentence(
      {{"dog", "NOUN", 2, "nsubj"}, {"chases", "VERB", 0, "root"}, {"bird", "NOUN", 2, "obj"}});
  auto cat_runs = testing::sentence({{"cat", "NOUN", 2, "nsubj"}, {"runs", "VERB", 0, "root"}});

  // cat + dog + bird: three distinct nouns on a two-hub pool.
  Blackboard bb(c);
  encode(bb, cat_runs);
  const auto before = bb.snapshot();
  std::vector<std::optional<ErrorCode>> attempts;
  for (int i = 0; i < 3; ++i) attempts.push_back(testing::code_of([&] { encode(bb, three_nouns); }));
  auto after = bb.snapshot();
  const bool failed = std::all_of(attempts.begin(), attempts.end(),
                                  [](auto code) { return code == ErrorCode::PoolExhausted; });
  const bool atomic = after["bindings"] == before["bindings"] && after["hubs"] == before["hubs"] &&
                      ask(bb, "cat do?") == Words{"runs"};
  bb.release_all();
  const bool succeeded = !testing::code_of([&] { encode(bb, three_nouns); }).has_value() &&
                         ask(bb, "dog do?") == Words{"chases"} && ask(bb, "chases theme?") == Words{"bird"};

  // A single sentence with three distinct nouns can never fit two N hubs.
  Blackboard fresh(c);
  auto single = testing::sentence({{"dog", "NOUN", 2, "nsubj"},
                                   {"gives", "VERB", 0, "root"},
                                   {"cat", "NOUN", 2, "obj"},
                                   {"to", "ADP", 5, "case"},
                                   {"bird", "NOUN", 3, "nmod"}});
  const bool single_fails = testing::code_of([&] { encode(fresh, single); }) == ErrorCode::PoolExhausted &&
                            fresh.active_bindings().empty();

  std::ostringstream out;
  out << "k_N=2: 3 attempts -> PoolExhausted " << (failed ? "x3" : "NOT every time") << ", rollback "
      << (atomic ? "atomic" : "LEAKED") << ", after release_all " << (succeeded ? "succeeds" : "FAILS")
      << "; single 3-noun sentence " << (single_fails ? "PoolExhausted" : "did not fail");
  return {failed && atomic && succeeded && single_fails, out.str()};
}

// 9 -------------------------------------------------------------------------

Outcome persistence() {
  int compared = 0;
  std::string mismatched;
  for (const auto& name : demo_names()) {
    DemoResult d = run_demo(name);
    auto text = d.board->snapshot().dump();
    Blackboard restored = Blackboard::restore(nlohmann::json::parse(text));
    auto again = rerun_queries(d, restored);
    for (std::size_t i = 0; i < again.size(); ++i) {
      ++compared;
      if (again[i].actual != d.queries[i].actual) mismatched += " " + name + ":" + again[i].text;
    }
    if (restored.snapshot().dump() != text) mismatched += " " + name + ":snapshot";
  }
  std::ostringstream out;
  out << compared << " demo answers re-run on restored snapshots of " << demo_names().size() << " demos";
  if (!mismatched.empty()) out << "; mismatches:" << mismatched;
  return {mismatched.empty(), out.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Demo scenario fidelity", demo_scenarios},
      {"Productivity at scale", productivity},
      {"Systematicity pair", systematicity},
      {"Double role", double_role},
      {"Constituent trace", constituent_trace},
      {"Small-world scaling", scaling},
      {"Dynamics invariants", dynamics_suite},
      {"Resource semantics", resources},
      {"Persistence", persistence},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
