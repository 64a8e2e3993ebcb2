#pragma once

#include <cstdint>
#include <filesystem>

namespace recam::toy {

// Synthetic lexicon, vectors, ratings and passage/summary corpus. Content
// words are "w<i>"; rating-only words are "r<i>". Concreteness is carried by
// the first vector coordinate, so a trained scorer recovers it.
struct Config {
  std::size_t pairs = 200;
  std::size_t words = 120;
  std::size_t rating_words = 400;
  int dim = 16;
  std::uint64_t seed = 0;
};

struct Paths {
  std::filesystem::path lexicon;     // toy lexicon format
  std::filesystem::path embeddings;  // "token v1 .. vd"
  std::filesystem::path ratings;     // word<TAB>raw
  std::filesystem::path corpus;      // JSONL pairs
};

// Writes lexicon.txt, embeddings.txt, ratings.tsv and corpus.jsonl into
// `dir` (created if missing). Output is a pure function of `cfg`.
Paths write_world(const Config& cfg, const std::filesystem::path& dir);

}  // namespace recam::toy
