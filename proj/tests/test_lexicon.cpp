#include <doctest.h>

#include "nba/error.hpp"
#include "nba/lexicon.hpp"
#include "support.hpp"

using namespace nba;
using testing::code_of;

TEST_CASE("parse_lexicon reads words and relations") {
  auto f = parse_lexicon("# animals\ncat\tN\n\nPaw\tN\nrun\tV\nsad\tADJ\ncat\thas\tpaw\n");
  REQUIRE(f.words.size() == 4);
  CHECK(f.words[1].word == "paw");
  CHECK(f.words[3].type == WordType::Adjective);
  REQUIRE(f.relations.size() == 1);
  CHECK(f.relations[0] == SemanticRelation{"cat", "has", "paw"});
}

TEST_CASE("parse_lexicon errors carry line numbers") {
  auto line_of = [](std::string_view text) -> std::pair<ErrorCode, int> {
    try {
      parse_lexicon(text);
    } catch (const Error& e) {
      return {e.code(), e.line().value_or(-1)};
    }
    return {ErrorCode::InvalidArgument, 0};
  };
  CHECK(line_of("cat\tN\ncat\n") == std::pair{ErrorCode::ParseError, 2});
  CHECK(line_of("cat\tN\ndog\tQ\n") == std::pair{ErrorCode::ParseError, 2});
  CHECK(line_of("cat\tN\n# x\nCat\tN\n") == std::pair{ErrorCode::DuplicateWord, 3});
  CHECK(line_of("cat\tN\ncat\thas\tpaw\n") == std::pair{ErrorCode::UnknownWord, 2});
}

TEST_CASE("parse_semantic_relations requires three columns") {
  auto rels = parse_semantic_relations("cat\tdo\trun\n\n# c\ndog\tdo\teat\n");
  CHECK(rels.size() == 2);
  CHECK(code_of([] { parse_semantic_relations("cat\tN\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("word tags round trip and case folding") {
  for (auto t : {WordType::Noun, WordType::Verb, WordType::Adjective, WordType::Preposition, WordType::Determiner,
                 WordType::Other}) {
    CHECK(word_type_from_tag(tag(t)) == t);
  }
  CHECK_FALSE(word_type_from_tag("NOUN").has_value());
  CHECK(fold_case("Bill") == "bill");
  CHECK(fold_case("\xC3\x89t\xC3\xA9") == "\xC3\x89t\xC3\xA9");
}

TEST_CASE("one concept population per word, relations idempotent") {
  Network net;
  Lexicon lex;
  auto& cat = lex.add_word(net, "cat", WordType::Noun);
  auto cat_id = cat.concept_id;
  lex.add_word(net, "paw", WordType::Noun);
  CHECK(code_of([&] { lex.add_word(net, "CAT", WordType::Noun); }) == ErrorCode::DuplicateWord);
  CHECK(code_of([&] { lex.add_word(net, " ", WordType::Noun); }) == ErrorCode::InvalidArgument);
  CHECK(lex.classify("Cat") == WordType::Noun);
  CHECK(lex.entry_for(cat_id)->word == "cat");

  const auto before = net.connection_count();
  lex.add_semantic_relation(net, "cat", "has", "paw");
  CHECK(net.connection_count() == before + 2);
  lex.add_semantic_relation(net, "cat", "has", "paw");
  CHECK(net.connection_count() == before + 2);
  CHECK(lex.has_relation_label("has"));
  CHECK(code_of([&] { lex.add_semantic_relation(net, "cat", "has", "tail"); }) == ErrorCode::UnknownWord);

  net.inject(cat_id, 1.0);
  net.set_control("sem:has", true);
  net.step();
  CHECK(net.activation(lex.entry("paw").concept_id) == 1.0);
}

TEST_CASE("load_lexicon builds populations from text") {
  Network net;
  auto lex = load_lexicon(net, "cat\tN\nrun\tV\ncat\tdo\trun\n");
  CHECK(lex.size() == 2);
  CHECK(lex.relations().size() == 1);
  CHECK(net.population(lex.entry("run").concept_id).kind == PopulationKind::Concept);
}
