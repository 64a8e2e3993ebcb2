#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "recam/corpus.hpp"
#include "recam/error.hpp"
#include "recam/text.hpp"

using namespace recam;

TEST_CASE("utf8 helpers address code points") {
  const std::string s = "naïve café";
  CHECK(text::utf8_length(s) == 10);
  CHECK(text::utf8_substr(s, 6, 4) == "café");
  CHECK(text::encode_utf8(text::decode_utf8(s)) == s);
}

TEST_CASE("tokenize: offsets, punctuation, clitics and placeholder") {
  const auto toks = text::tokenize("The whale's song, @placeholder ended.");
  std::vector<std::string> surf;
  for (const auto& t : toks) surf.push_back(t.surface);
  CHECK(surf == std::vector<std::string>{"The", "whale", "'s", "song", ",", "@placeholder", "ended", "."});
  CHECK(toks[3].offset == 12);
  CHECK(toks[5].offset == 18);
  CHECK(toks[4].is_word == false);
  const auto accented = text::tokenize("café au lait");
  CHECK(accented[1].offset == 5);
  CHECK(text::tokenize("well-known fact")[0].surface == "well-known");
}

TEST_CASE("words drops punctuation and lowercases") {
  CHECK(text::words("Big, BIG whale!") == std::vector<std::string>{"big", "big", "whale"});
}

TEST_CASE("fnv1a64 matches the reference vectors") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(text::fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("ingest: records, pretagged tokens and errors") {
  std::istringstream ok(
      R"({"id":"a","passage":"The whale swam.","summary":"A whale."})"
      "\n\n"
      R"({"id":"b","passage":"x y","summary":"y","summary_tokens":[{"surface":"y","pos":"NOUN"}]})"
      "\n");
  const auto pairs = ingest(ok, "mem");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[1].summary_tokens->at(0).pos == Pos::kNoun);

  std::istringstream bad(R"({"id":"a","passage":"p","summary":"s"})"
                         "\n"
                         R"({"id":"b","passage":"p")"
                         "\n");
  try {
    ingest(bad, "mem");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream dup(R"({"id":"a","passage":"p","summary":"s"})"
                         "\n"
                         R"({"id":"a","passage":"p","summary":"s"})"
                         "\n");
  CHECK_THROWS_AS(ingest(dup, "mem"), ValidationError);
  std::istringstream empty(R"({"id":"a","passage":"  ","summary":"s"})");
  CHECK_THROWS_AS(ingest(empty, "mem"), ValidationError);
}

TEST_CASE("analyze tags and lemmatizes against the lexicon") {
  const Lexicon lex = load_lexicon(oracle::data_dir() / "toy_lexicon.txt");
  const LexiconTagger tagger(lex);
  DocumentPair p{"d", "Whales grew quickly near the bank.", "The big whale.", std::nullopt, std::nullopt};
  const auto a = analyze(p, lex, tagger);
  REQUIRE(a.passage.size() == 7);
  CHECK(a.passage[0].lemma == "whale");
  CHECK(a.passage[0].pos == Pos::kNoun);
  CHECK(a.passage[1].lemma == "grow");
  CHECK(a.passage[1].pos == Pos::kVerb);
  CHECK(a.passage[2].pos == Pos::kAdverb);
  CHECK(a.passage[4].pos == Pos::kOther);
  CHECK(a.passage[6].pos == Pos::kPunct);
  CHECK(a.summary[1].pos == Pos::kAdjective);
  CHECK(a.summary[2].char_offset == 8);

  DocumentPair t{"t", "ab ab", "ab", std::vector<PretaggedToken>{{"ab", Pos::kVerb}, {"ab", Pos::kNoun}},
                 std::nullopt};
  const auto b = analyze(t, lex, tagger);
  CHECK(b.passage[1].char_offset == 3);
  CHECK(b.passage[1].pos == Pos::kNoun);
  t.passage_tokens = std::vector<PretaggedToken>{{"zz", Pos::kNoun}};
  CHECK_THROWS_AS(analyze(t, lex, tagger), ValidationError);
}
