#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "recam/abstractness.hpp"
#include "recam/corpus.hpp"
#include "recam/embeddings.hpp"
#include "recam/manifest.hpp"
#include "recam/text.hpp"
#include "recam/toy_world.hpp"

using namespace recam;

TEST_CASE("toy world is a pure function of its config and loads cleanly") {
  const auto base = std::filesystem::temp_directory_path() / "recam_toy";
  std::filesystem::remove_all(base);
  toy::Config cfg;
  cfg.pairs = 15;
  cfg.words = 40;
  cfg.rating_words = 60;
  cfg.dim = 8;
  const auto a = toy::write_world(cfg, base / "a");
  toy::write_world(cfg, base / "b");
  CHECK(hash_path(base / "a") == hash_path(base / "b"));
  cfg.seed = 1;
  toy::write_world(cfg, base / "c");
  CHECK(hash_path(base / "a") != hash_path(base / "c"));

  const Lexicon lex = load_lexicon(a.lexicon);
  const auto emb = load_embeddings(a.embeddings);
  CHECK(emb.dim() == 8);
  const auto pairs = ingest(a.corpus);
  CHECK(pairs.size() == 15);
  const LexiconTagger tagger(lex);
  for (const auto& p : pairs) CHECK_NOTHROW(analyze(p, lex, tagger));
  for (const auto& r : load_ratings(a.ratings)) CHECK_NOTHROW(scale_rating(r.raw_rating));
}

TEST_CASE("manifest has stable content and no timestamps") {
  const auto dir = std::filesystem::temp_directory_path() / "recam_manifest";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "in.txt") << "hello";
  }
  RunManifest m;
  m.command = "generate";
  m.seed = 3;
  m.add_input("corpus", dir / "in.txt");
  m.counts["emitted"] = 4;
  m.warnings.push_back("w");
  const auto j = m.to_json();
  CHECK(j["inputs"]["corpus"] == text::hex64(text::fnv1a64("hello")));
  CHECK(j.dump() == m.to_json().dump());
  CHECK(j.dump().find("time") == std::string::npos);
}
