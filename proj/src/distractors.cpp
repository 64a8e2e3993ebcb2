#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "recam/error.hpp"
#include "recam/qgen.hpp"
#include "recam/text.hpp"

namespace recam {

ModelTrainer make_reader_trainer(readers::Variant variant, readers::ModelShape shape, readers::TrainingConfig cfg,
                                 std::shared_ptr<const EmbeddingTable> text, readers::GlossFn gloss) {
  if (variant != readers::Variant::kAmwg) gloss = nullptr;
  return [=](std::span<const readers::ReaderItem> items, const std::vector<std::string>& vocab,
             std::uint64_t seed) -> TopK {
    auto model = std::make_shared<readers::ReaderModel>(variant, shape, vocab, text, gloss, seed);
    readers::TrainingConfig c = cfg;
    c.seed = seed;
    readers::train(*model, items, c);
    auto prepared = std::make_shared<readers::CandidateSet>(model->prepare(vocab));
    return [model, prepared](const readers::ReaderItem& item, std::size_t k) {
      return readers::predict_topk(*model, item, *prepared, k);
    };
  };
}

std::vector<NamedTrainer> default_trainers(readers::ModelShape shape, readers::TrainingConfig cfg,
                                           std::shared_ptr<const EmbeddingTable> text, readers::GlossFn gloss) {
  std::vector<NamedTrainer> out;
  for (auto v : {readers::Variant::kGa, readers::Variant::kAtt, readers::Variant::kAmwg}) {
    out.push_back({std::string(readers::variant_name(v)), make_reader_trainer(v, shape, cfg, text, gloss)});
  }
  return out;
}

std::vector<std::string> rank_pool_types(std::span<const PoolEntry> pool) {
  struct Stat {
    int count = 0;
    int best = std::numeric_limits<int>::max();
  };
  std::map<std::string, Stat> stats;
  for (const auto& e : pool) {
    Stat& s = stats[e.word];
    ++s.count;
    s.best = std::min(s.best, e.rank);
  }
  std::vector<std::pair<std::string, Stat>> v(stats.begin(), stats.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.best != b.second.best) return a.second.best < b.second.best;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (auto& [w, s] : v) out.push_back(w);
  return out;
}

bool excluded_distractor(std::string_view word, std::string_view gold, const Lexicon& lex,
                         const EmbeddingTable& table) {
  const std::string w = text::to_lower(word);
  const std::string g = text::to_lower(gold);
  if (w == g) return true;
  const auto syn = synonyms(g, lex);
  if (syn.count(w)) return true;
  for (const auto& [lemma, pos] : lemmatize_any(w, lex)) {
    if (syn.count(lemma)) return true;
  }
  const auto* u = table.find(w);
  const auto* v = table.find(g);
  if (u && v && u->norm() > 0 && v->norm() > 0 && cosine(*u, *v) > kSimilarityThreshold) return true;
  return false;
}

DistractorResult generate_distractors(std::span<const QuestionDraft> drafts, std::span<const NamedTrainer> models,
                                      const Lexicon& lex, const EmbeddingTable& table, const DistractorConfig& cfg) {
  const std::size_t n = drafts.size();
  if (cfg.folds < 2) throw ValidationError("need at least 2 folds");
  if (models.empty()) throw ValidationError("no distractor models");
  if (n < static_cast<std::size_t>(cfg.folds)) {
    throw ValidationError(std::to_string(n) + " drafts is fewer than " + std::to_string(cfg.folds) + " folds",
                          "too_few_drafts");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  nn::Rng rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(cfg.folds));

  DistractorResult res;
  res.traces.resize(n);
  res.questions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.traces[i].draft = i;
    res.traces[i].fold = fold_of[i];
  }

  for (int f = 0; f < cfg.folds; ++f) {
    std::vector<readers::ReaderItem> train_items;
    std::set<std::size_t> trained_on;
    std::set<std::string> vocab_set;
    std::vector<int> train_folds;
    for (int g = 0; g < cfg.folds; ++g) {
      if (g != f) train_folds.push_back(g);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == f) continue;
      train_items.push_back(reader_item(drafts[i]));
      trained_on.insert(i);
      vocab_set.insert(drafts[i].target_word);
    }
    const std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
    for (const auto& m : models) {
      const std::uint64_t seed = text::fnv1a64(m.name, cfg.seed + static_cast<std::uint64_t>(f));
      TopK topk = m.train(train_items, vocab, seed);
      for (std::size_t i = 0; i < n; ++i) {
        if (fold_of[i] != f) continue;
        const auto preds = topk(reader_item(drafts[i]), cfg.top_k);
        int rank = 0;
        for (const auto& [word, prob] : preds) {
          res.traces[i].pool.push_back(PoolEntry{word, m.name, ++rank, f, train_folds, trained_on});
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    DistractorTrace& tr = res.traces[i];
    const QuestionDraft& d = drafts[i];
    std::map<std::string, bool> verdict;
    std::vector<PoolEntry> kept;
    for (const auto& e : tr.pool) {
      auto [it, inserted] = verdict.try_emplace(e.word, false);
      if (inserted) {
        it->second = excluded_distractor(e.word, d.target_word, lex, table);
        if (it->second) tr.excluded.push_back(e.word);
      }
      if (!it->second) kept.push_back(e);
    }
    auto ranked = rank_pool_types(kept);
    if (ranked.size() < kOptionCount - 1) {
      ++res.dropped;
      continue;
    }
    ranked.resize(kOptionCount - 1);
    tr.distractors = ranked;

    Question q;
    q.pair_id = d.pair_id;
    q.passage = d.passage_text;
    q.question = d.question_text;
    q.options = ranked;
    q.options.push_back(d.target_word);
    nn::Rng shuffle_rng(text::fnv1a64(d.pair_id + "#" + std::to_string(d.token_index), cfg.seed));
    std::shuffle(q.options.begin(), q.options.end(), shuffle_rng);
    q.label = static_cast<int>(std::find(q.options.begin(), q.options.end(), d.target_word) - q.options.begin());
    res.questions[i] = std::move(q);
  }
  return res;
}

}  // namespace recam
