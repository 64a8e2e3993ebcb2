// Adapted Lesk sense selection and the hypernym-depth nonspecificity score.

#include <algorithm>
#include <unordered_map>

#include "recam/abstractness.hpp"
#include "recam/text.hpp"

namespace recam {
namespace {

constexpr int kBreak = -1;
constexpr int kUsed = -2;

class Interner {
 public:
  int id(const std::string& s) {
    if (s.empty()) return kBreak;
    auto [it, inserted] = ids_.emplace(s, static_cast<int>(ids_.size()));
    return it->second;
  }

 private:
  std::unordered_map<std::string, int> ids_;
};

void AppendContent(std::string_view txt, const Lexicon& lex, std::vector<std::string>& out) {
  out.emplace_back(kSegmentBreak);
  for (const auto& w : text::words(txt)) {
    if (text::is_stopword(w)) continue;
    auto lemmas = lemmatize_any(w, lex);
    out.push_back(lemmas.empty() ? w : lemmas.front().first);
  }
}

void AppendSynsetText(const Synset& s, const Lexicon& lex, std::vector<std::string>& out) {
  AppendContent(s.gloss, lex, out);
  for (const auto& ex : s.examples) AppendContent(ex, lex, out);
}

}  // namespace

double lesk_overlap(std::span<const std::string> signature, std::span<const std::string> context) {
  Interner interner;
  std::vector<int> sig, ctx;
  sig.reserve(signature.size());
  ctx.reserve(context.size());
  for (const auto& s : signature) sig.push_back(interner.id(s));
  for (const auto& c : context) ctx.push_back(interner.id(c));

  double score = 0;
  std::vector<int> prev(ctx.size() + 1), cur(ctx.size() + 1);
  for (;;) {
    // Longest common run between unused signature tokens and the context.
    int best = 0;
    std::size_t best_end = 0;
    std::fill(prev.begin(), prev.end(), 0);
    for (std::size_t i = 0; i < sig.size(); ++i) {
      cur[0] = 0;
      for (std::size_t j = 0; j < ctx.size(); ++j) {
        cur[j + 1] = (sig[i] >= 0 && sig[i] == ctx[j]) ? prev[j] + 1 : 0;
        if (cur[j + 1] > best) {
          best = cur[j + 1];
          best_end = i;
        }
      }
      std::swap(prev, cur);
    }
    if (best == 0) break;
    score += static_cast<double>(best) * best;
    for (std::size_t k = best_end + 1 - static_cast<std::size_t>(best); k <= best_end; ++k) sig[k] = kUsed;
  }
  return score;
}

std::vector<std::string> extended_signature(const Synset& synset, const Lexicon& lex) {
  std::vector<std::string> sig;
  AppendSynsetText(synset, lex, sig);
  for (const auto& id : synset.hypernyms) AppendSynsetText(lex.synset(id), lex, sig);
  for (const auto& id : synset.hyponyms) AppendSynsetText(lex.synset(id), lex, sig);
  return sig;
}

SenseChoice disambiguate(std::string_view word, std::span<const std::string> context,
                         const Lexicon& lex, std::optional<Pos> pos) {
  std::vector<std::string> candidates;
  for (const auto& [lemma, p] : lemmatize_any(word, lex)) {
    if (pos && p != *pos) continue;
    for (const auto& id : lex.senses(lemma, p)) {
      if (std::find(candidates.begin(), candidates.end(), id) == candidates.end()) candidates.push_back(id);
    }
  }
  if (candidates.empty()) throw LookupError("no sense for word '" + std::string(word) + "'");

  std::vector<std::string> ctx;
  ctx.reserve(context.size());
  for (const auto& c : context) {
    if (c.empty() || text::is_punctuation(c)) {
      ctx.emplace_back(kSegmentBreak);
      continue;
    }
    std::string l = text::to_lower(c);
    if (!text::is_stopword(l)) ctx.push_back(std::move(l));
  }

  SenseChoice best{std::string(word), candidates.front(), -1.0};
  for (const auto& id : candidates) {
    const double score = lesk_overlap(extended_signature(lex.synset(id), lex), ctx);
    if (score > best.score) {
      best.synset_id = id;
      best.score = score;
    }
  }
  return best;
}

int nonspecificity(std::string_view word, Pos pos, std::span<const std::string> summary_lemmas,
                   std::span<const std::string> passage_lemmas, const Lexicon& lex) {
  if (pos != Pos::kNoun && pos != Pos::kVerb) {
    throw DomainError("nonspecificity is defined for nouns and verbs only");
  }
  std::vector<std::string> ctx(summary_lemmas.begin(), summary_lemmas.end());
  ctx.emplace_back(kSegmentBreak);
  ctx.insert(ctx.end(), passage_lemmas.begin(), passage_lemmas.end());
  const SenseChoice choice = disambiguate(word, ctx, lex, pos);
  return hypernym_depth(choice.synset_id, lex);
}

}  // namespace recam
