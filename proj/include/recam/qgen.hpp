#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recam/abstractness.hpp"
#include "recam/corpus.hpp"
#include "recam/embeddings.hpp"
#include "recam/lexicon.hpp"
#include "recam/readers/model.hpp"
#include "recam/readers/train.hpp"

namespace recam {

enum class Subtask { kImperceptibility, kNonspecificity };

std::string_view subtask_name(Subtask s);
// Throws UsageError.
Subtask parse_subtask(std::string_view s);

inline constexpr double kImperceptibilityThreshold = 0.35;
inline constexpr int kNonspecificityThreshold = 6;
inline constexpr double kSimilarityThreshold = 0.85;
inline constexpr std::size_t kOptionCount = 5;

struct QuestionDraft {
  std::string pair_id;
  std::string target_surface;
  std::string target_word;  // lowercased surface; the gold option
  std::string target_lemma;
  Pos target_pos = Pos::kOther;
  std::size_t token_index = 0;  // into the summary tokens
  std::string question_text;    // summary with the target replaced
  Subtask subtask = Subtask::kImperceptibility;
  double score = 0;

  std::string passage_text;
  std::vector<std::string> passage_words;   // lowercased, every token
  std::vector<std::string> question_words;  // lowercased, placeholder in place
};

struct Question {
  std::string pair_id;
  std::string passage;
  std::string question;
  std::vector<std::string> options;
  int label = 0;
};

// Abstractness of summary token `index`; nullopt when it cannot be assessed
// (no vector, no sense).
using TargetScore = std::function<std::optional<double>(const AnalyzedPair&, std::size_t index)>;

TargetScore imperceptibility_score(const RegressionScorer& scorer, const EmbeddingTable& table);
TargetScore nonspecificity_score(const Lexicon& lex);

struct SelectStats {
  std::size_t candidates = 0;  // tokens passing the POS rule
  std::size_t unscored = 0;    // skipped as OOV / no sense
};

// Summary tokens whose POS fits the subtask and whose score is strictly
// below its threshold.
std::vector<QuestionDraft> select_targets(const AnalyzedPair& pair, Subtask subtask, const TargetScore& score,
                                          SelectStats* stats = nullptr);

// Replaces summary token `index` with "@placeholder".
QuestionDraft make_draft(const AnalyzedPair& pair, std::size_t index, Subtask subtask, double score);

bool filter_lemma(const QuestionDraft& draft, std::span<const Token> passage);
bool filter_synonym_antonym(const QuestionDraft& draft, std::span<const Token> passage, const Lexicon& lex);
// `oov` is set when the target has no static vector (kept).
bool filter_similarity(const QuestionDraft& draft, std::span<const Token> passage, const EmbeddingTable& table,
                       const ContextualVectors* ctx = nullptr, bool* oov = nullptr);

// ---------------------------------------------------------------------------
// Distractors

// Ranked predictions of a trained model.
using TopK = std::function<std::vector<std::pair<std::string, double>>(const readers::ReaderItem&, std::size_t k)>;
// Trains on `items` ranking over `vocab`.
using ModelTrainer =
    std::function<TopK(std::span<const readers::ReaderItem> items, const std::vector<std::string>& vocab,
                       std::uint64_t seed)>;

struct NamedTrainer {
  std::string name;
  ModelTrainer train;
};

ModelTrainer make_reader_trainer(readers::Variant variant, readers::ModelShape shape, readers::TrainingConfig cfg,
                                 std::shared_ptr<const EmbeddingTable> text, readers::GlossFn gloss);
// GA, ATT and AMWG trainers.
std::vector<NamedTrainer> default_trainers(readers::ModelShape shape, readers::TrainingConfig cfg,
                                           std::shared_ptr<const EmbeddingTable> text, readers::GlossFn gloss);

readers::ReaderItem reader_item(const QuestionDraft& draft);

// One prediction in a draft's distractor pool.
struct PoolEntry {
  std::string word;
  std::string model;
  int rank = 0;  // 1-based
  int fold = 0;
  std::vector<int> train_folds;
  std::set<std::size_t> trained_on;  // draft indices seen by the model
};

struct DistractorTrace {
  std::size_t draft = 0;
  int fold = 0;
  std::vector<PoolEntry> pool;
  std::vector<std::string> excluded;  // pool types removed before ranking
  std::vector<std::string> distractors;
};

// Word types of the pool by descending count, then best (lowest) rank, then
// lexicographic order.
std::vector<std::string> rank_pool_types(std::span<const PoolEntry> pool);

// True when `word` should not be offered alongside `gold`: the gold word
// itself, one of its synonyms (lemma-aware), or a static similarity above
// the threshold.
bool excluded_distractor(std::string_view word, std::string_view gold, const Lexicon& lex,
                         const EmbeddingTable& table);

struct DistractorConfig {
  int folds = 4;
  std::size_t top_k = 10;
  std::uint64_t seed = 0;
};

struct DistractorResult {
  std::vector<std::optional<Question>> questions;  // parallel to drafts; nullopt = dropped
  std::vector<DistractorTrace> traces;              // parallel to drafts
  std::size_t dropped = 0;
};

DistractorResult generate_distractors(std::span<const QuestionDraft> drafts, std::span<const NamedTrainer> models,
                                      const Lexicon& lex, const EmbeddingTable& table, const DistractorConfig& cfg);

// ---------------------------------------------------------------------------
// Whole pipeline

struct StageCounts {
  std::size_t pairs = 0;
  std::size_t drafts = 0;
  std::size_t rejected_lemma = 0;
  std::size_t rejected_synonym_antonym = 0;
  std::size_t rejected_similarity = 0;
  std::size_t dropped_distractors = 0;
  std::size_t emitted = 0;
  std::size_t unscored_tokens = 0;
  std::size_t similarity_oov = 0;
};

struct GenerationConfig {
  Subtask subtask = Subtask::kImperceptibility;
  DistractorConfig distractors;
  bool use_contextual = true;
};

struct GenerationResult {
  std::vector<Question> questions;
  std::vector<QuestionDraft> drafts;  // drafts that reached the distractor stage
  std::vector<DistractorTrace> traces;
  StageCounts counts;
  std::vector<std::string> warnings;
};

GenerationResult generate_questions(std::span<const AnalyzedPair> pairs, const TargetScore& score, const Lexicon& lex,
                                    const EmbeddingTable& table, const ContextualVectors* ctx,
                                    std::span<const NamedTrainer> models, const GenerationConfig& cfg);

// Line-delimited {"article","question","option_0".."option_4","label"}.
void write_questions(std::ostream& out, std::span<const Question> questions);
void write_questions(const std::filesystem::path& file, std::span<const Question> questions);
std::vector<Question> read_questions(const std::filesystem::path& file);
std::vector<Question> read_questions(std::istream& in, const std::string& name);

// Reader input for a question; `id` names the item.
readers::ReaderItem reader_item(const Question& q, const std::string& id);

}  // namespace recam
