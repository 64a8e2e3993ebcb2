#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recam/lexicon.hpp"

namespace recam {

struct PretaggedToken {
  std::string surface;
  Pos pos = Pos::kOther;
};

struct DocumentPair {
  std::string id;
  std::string passage;
  std::string summary;
  // Present when the record supplied its own tagging.
  std::optional<std::vector<PretaggedToken>> passage_tokens;
  std::optional<std::vector<PretaggedToken>> summary_tokens;
};

struct Token {
  std::string surface;
  std::string lower;
  std::string lemma;
  Pos pos = Pos::kOther;
  std::size_t char_offset = 0;  // code points into the source text
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<Pos> tag(std::span<const std::string> surfaces) const = 0;
};

// Closed-class list, "-ly" adverbs, "-ed"/"-ing" on a known verb stem, then
// the POS with the most senses in the lexicon; unknown words are nouns.
class LexiconTagger final : public Tagger {
 public:
  explicit LexiconTagger(const Lexicon& lex) : lex_(&lex) {}
  std::vector<Pos> tag(std::span<const std::string> surfaces) const override;
  Pos tag_word(std::string_view surface) const;

 private:
  const Lexicon* lex_;
};

// Line-delimited {"id","passage","summary"} records with optional
// "passage_tokens"/"summary_tokens" arrays of {"surface","pos"}.
std::vector<DocumentPair> ingest(const std::filesystem::path& file);
std::vector<DocumentPair> ingest(std::istream& in, const std::string& name);

struct AnalyzedPair {
  DocumentPair pair;
  std::vector<Token> passage;
  std::vector<Token> summary;
};

// Throws ValidationError when either text has no tokens.
AnalyzedPair analyze(const DocumentPair& pair, const Lexicon& lex, const Tagger& tagger);

std::vector<std::string> lemmas_of(std::span<const Token> tokens);
std::vector<std::string> lowers_of(std::span<const Token> tokens);

}  // namespace recam
