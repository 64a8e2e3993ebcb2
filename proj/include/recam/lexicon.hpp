#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace recam {

// Lexical categories carried by the sense inventory, plus the two
// non-lexical tags the tagger needs.
enum class Pos { kNoun, kVerb, kAdjective, kAdverb, kOther, kPunct };

inline constexpr std::array<Pos, 4> kLexicalPos = {Pos::kNoun, Pos::kVerb, Pos::kAdjective,
                                                    Pos::kAdverb};

std::string_view pos_name(Pos pos);
// Accepts "noun"/"n"/"NOUN", "verb"/"v", "adj"/"a"/"s"/"ADJ", "adv"/"r", "PUNCT", ...
std::optional<Pos> parse_pos(std::string_view s);
bool is_content(Pos pos);

struct Synset {
  std::string id;
  Pos pos = Pos::kNoun;
  std::vector<std::string> lemmas;
  std::string gloss;
  std::vector<std::string> examples;
  std::vector<std::string> hypernyms;
  std::vector<std::string> hyponyms;
  // (lemma in this synset, lemma in the other synset)
  std::vector<std::pair<std::string, std::string>> antonym_pairs;
};

// Immutable sense inventory. Build through Lexicon::Builder; the builder
// validates the hypernym graph and precomputes every longest-path depth, so
// all queries are const reads.
class Lexicon {
 public:
  class Builder {
   public:
    Builder& add(Synset synset);
    Builder& add_exception(Pos pos, std::string form, std::string lemma);
    // Overrides the insertion-order sense ranking for (lemma, pos).
    Builder& set_senses(std::string lemma, Pos pos, std::vector<std::string> ids);
    Lexicon build() &&;

   private:
    std::vector<Synset> synsets_;
    std::map<std::pair<std::string, Pos>, std::vector<std::string>> explicit_senses_;
    std::array<std::map<std::string, std::vector<std::string>>, 4> exceptions_;
  };

  const std::map<std::string, Synset, std::less<>>& synsets() const { return synsets_; }
  std::size_t size() const { return synsets_.size(); }
  const Synset* find(std::string_view id) const;
  // Throws LookupError for unknown ids.
  const Synset& synset(std::string_view id) const;

  // Synset ids in sense-rank order; empty when the lemma is unknown.
  std::span<const std::string> senses(std::string_view lemma, Pos pos) const;
  bool has_lemma(std::string_view lemma, Pos pos) const { return !senses(lemma, pos).empty(); }
  std::span<const std::string> exceptions(std::string_view form, Pos pos) const;

  // Precomputed longest hypernym path; nullopt for adjectives/adverbs.
  std::optional<int> depth(std::string_view id) const;
  int max_depth(Pos pos) const;

  const std::map<std::pair<std::string, Pos>, std::vector<std::string>>& sense_index() const {
    return sense_index_;
  }

 private:
  std::map<std::string, Synset, std::less<>> synsets_;
  std::map<std::pair<std::string, Pos>, std::vector<std::string>> sense_index_;
  std::array<std::map<std::string, std::vector<std::string>, std::less<>>, 4> exceptions_;
  std::map<std::string, int, std::less<>> depth_;
  std::array<int, 2> max_depth_{0, 0};
};

// Directory => WNdb 3.0 plain-text database; regular file => toy format.
Lexicon load_lexicon(const std::filesystem::path& path);

// One synset per line: id|pos|lemmas|gloss|hypernym-ids|antonyms[|examples]
//   lemmas, hypernym-ids: comma separated; antonyms: comma separated
//   "lemma:other_lemma"; examples: ';' separated. Exception entries:
//   "!exc|pos|form|lemma". '#' starts a comment line.
Lexicon load_toy_lexicon(const std::filesystem::path& file);

// index.{noun,verb,adj,adv}, data.{...}, {noun,verb,adj,adv}.exc
Lexicon load_wndb(const std::filesystem::path& dir);

// Morphy-style lemmatizer: exception list, identity, then detachment
// suffixes. Only lemmas present in the sense index survive.
std::vector<std::string> lemmatize(std::string_view word, Pos pos, const Lexicon& lex);

// (lemma, pos) pairs over every lexical POS, in POS order.
std::vector<std::pair<std::string, Pos>> lemmatize_any(std::string_view word, const Lexicon& lex);

// Co-member lemmas of every sense of every lemmatization, plus antonyms.
std::set<std::string> synonym_antonym_pool(std::string_view word, const Lexicon& lex);

// Co-member lemmas only (no antonyms).
std::set<std::string> synonyms(std::string_view word, const Lexicon& lex);

int hypernym_depth(std::string_view synset_id, const Lexicon& lex);

// "<NOUN> gloss <VERB> gloss ..." from the first sense of each POS.
std::string gloss_for_candidate(std::string_view word, const Lexicon& lex);

}  // namespace recam
