#include <charconv>

#include "nba/encoder.hpp"
#include "nba/error.hpp"
#include "text_util.hpp"

namespace nba {

namespace {

std::optional<WordType> upos_type(std::string_view upos) {
  if (upos == "NOUN" || upos == "PROPN") return WordType::Noun;
  if (upos == "VERB") return WordType::Verb;
  if (upos == "ADJ") return WordType::Adjective;
  if (upos == "ADP") return WordType::Preposition;
  if (upos == "DET") return WordType::Determiner;
  if (upos == "PUNCT") return WordType::Other;
  return std::nullopt;
}

int parse_int(std::string_view s, const char* what, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + std::string(s) + "'", line);
  }
  return value;
}

void finish(std::vector<Sentence>& out, Sentence& s) {
  if (s.tokens.empty()) return;
  validate_tree(s.tokens, s.arcs);
  out.push_back(std::move(s));
  s = Sentence{};
}

}  // namespace

std::vector<Sentence> parse_conllu_document(std::string_view text) {
  std::vector<Sentence> out;
  Sentence pending;
  for (const auto& [number, line] : detail::split_lines(text)) {
    if (detail::trim(line).empty()) {
      finish(out, pending);
      continue;
    }
    if (line.front() == '#') continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 10) {
      throw Error(ErrorCode::ParseError, "expected 10 tab-separated columns, got " + std::to_string(cols.size()),
                  number);
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "multiword and empty nodes are not supported", number);
    }
    Token token;
    token.index = parse_int(cols[0], "ID", number);
    token.surface = std::string(cols[1]);
    if (token.surface.empty() || token.surface == "_") throw Error(ErrorCode::ParseError, "empty FORM", number);
    auto type = upos_type(cols[3]);
    if (!type) throw Error(ErrorCode::UnknownUpos, "UPOS '" + std::string(cols[3]) + "' is not supported", number);
    token.type = *type;
    int head = parse_int(cols[6], "HEAD", number);
    if (cols[7].empty() || cols[7] == "_") throw Error(ErrorCode::ParseError, "missing DEPREL", number);
    pending.arcs.push_back(DependencyArc{head, token.index, std::string(cols[7])});
    pending.tokens.push_back(std::move(token));
  }
  finish(out, pending);
  return out;
}

Sentence parse_conllu(std::string_view text) {
  auto sentences = parse_conllu_document(text);
  if (sentences.size() != 1) {
    throw Error(ErrorCode::ParseError, "expected exactly one sentence, found " + std::to_string(sentences.size()));
  }
  return std::move(sentences.front());
}

void validate_tree(const std::vector<Token>& tokens, const std::vector<DependencyArc>& arcs) {
  const int n = static_cast<int>(tokens.size());
  for (int i = 0; i < n; ++i) {
    if (tokens[i].index != i + 1) throw Error(ErrorCode::NotATree, "token ids must run 1..n without gaps");
  }
  std::vector<int> head(n + 1, -1);
  for (const auto& a : arcs) {
    if (a.dependent < 1 || a.dependent > n) throw Error(ErrorCode::NotATree, "arc to unknown token");
    if (a.head < 0 || a.head > n) throw Error(ErrorCode::NotATree, "arc from unknown token");
    if (a.head == a.dependent) throw Error(ErrorCode::NotATree, "token is its own head");
    if (head[a.dependent] != -1) throw Error(ErrorCode::NotATree, "token has two heads");
    head[a.dependent] = a.head;
  }
  for (int i = 1; i <= n; ++i) {
    if (head[i] == -1) throw Error(ErrorCode::NotATree, "token " + std::to_string(i) + " has no head");
  }
  for (int i = 1; i <= n; ++i) {
    int at = i;
    for (int hops = 0; at != 0; ++hops) {
      if (hops > n) throw Error(ErrorCode::NotATree, "cycle through token " + std::to_string(i));
      at = head[at];
    }
  }
}

}  // namespace nba
