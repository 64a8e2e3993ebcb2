// Writes the synthetic toy world used by the examples and tests.
#include <iostream>

#include "CLI11.hpp"
#include "recam/error.hpp"
#include "recam/toy_world.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic lexicon, vectors, ratings and corpus"};
  recam::toy::Config cfg;
  std::string out = "data/toy";
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--pairs", cfg.pairs)->capture_default_str();
  app.add_option("--words", cfg.words)->capture_default_str();
  app.add_option("--rating-words", cfg.rating_words)->capture_default_str();
  app.add_option("--dim", cfg.dim)->capture_default_str();
  app.add_option("--seed", cfg.seed)->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    const auto paths = recam::toy::write_world(cfg, out);
    std::cout << paths.lexicon.string() << '\n'
              << paths.embeddings.string() << '\n'
              << paths.ratings.string() << '\n'
              << paths.corpus.string() << '\n';
  } catch (const recam::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}
