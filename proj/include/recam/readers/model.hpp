#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recam/embeddings.hpp"
#include "recam/nn.hpp"
#include "recam/readers/gru.hpp"

namespace recam::readers {

enum class Variant { kGa, kAtt, kAmwg };

std::string_view variant_name(Variant v);
// "ga" | "att" | "amwg"; throws UsageError.
Variant parse_variant(std::string_view s);

// One cloze item. `summary` holds the "@placeholder" token; an empty
// `options` list means "rank the model's whole candidate vocabulary".
struct ReaderItem {
  std::string id;
  std::vector<std::string> passage;
  std::vector<std::string> summary;
  std::vector<std::string> options;
  std::string gold;
};

// Throws ValidationError when the summary has no placeholder.
std::size_t placeholder_index(const ReaderItem& item);

// Gloss text for a candidate word ("" when none).
using GlossFn = std::function<std::string(std::string_view)>;

// Gloss text split into tokens; "<NOUN>"-style delimiters stay whole.
std::vector<std::string> gloss_tokens(std::string_view gloss);

struct ModelShape {
  Eigen::Index hidden = 150;  // per direction
  int hops = 3;               // GA layers
};

// Candidates prepared for scoring: embedding column per word plus encoded
// gloss states (AMWG only).
struct CandidateSet {
  std::vector<std::string> words;
  std::vector<Eigen::Index> emb_columns;
  std::vector<std::vector<Eigen::Index>> gloss_ids;
  std::vector<Eigen::MatrixXd> gloss_states;
};

// Attention weights recorded during a forward pass.
struct AttentionTrace {
  Eigen::VectorXd passage;                    // over passage tokens
  std::vector<Eigen::MatrixXd> gate;          // GA: rows = passage tokens, softmax over summary
  std::vector<Eigen::VectorXd> gloss;         // AMWG: per candidate (empty gloss => size 0)
};

// GA / ATT / AMWG readers over fixed text embeddings with trainable
// candidate (and, for AMWG, gloss) embeddings. Candidate column V is UNK.
class ReaderModel {
 public:
  ReaderModel(Variant variant, ModelShape shape, std::vector<std::string> vocab,
              std::shared_ptr<const EmbeddingTable> text, GlossFn gloss, std::uint64_t seed);

  Variant variant() const { return variant_; }
  const ModelShape& shape() const { return shape_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::string>& gloss_vocab() const { return gloss_vocab_; }
  Eigen::Index text_dim() const { return text_->dim(); }
  std::string vocab_hash() const;
  void set_gloss_fn(GlossFn fn) { gloss_fn_ = std::move(fn); }

  CandidateSet prepare(std::span<const std::string> candidates) const;

  // Softmax over the candidates.
  Eigen::VectorXd probabilities(const ReaderItem& item, const CandidateSet& candidates,
                                AttentionTrace* trace = nullptr) const;
  Eigen::VectorXd probabilities(const ReaderItem& item) const;

  // Negative log-likelihood of item.gold summed over `batch`; parameter
  // gradients are accumulated (not averaged). With `dropout_rng` set,
  // inverted dropout of rate `dropout` is applied to every encoder input and
  // to the summarization vector.
  double accumulate_gradients(std::span<const ReaderItem* const> batch, nn::Rng* dropout_rng,
                              double dropout);
  // Loss only, no dropout.
  double loss(std::span<const ReaderItem* const> batch) const;

  std::vector<nn::Param*> parameters();
  std::vector<const nn::Param*> parameters() const;
  void zero_grad();

  // Candidate words for an item: its options, or the vocabulary.
  std::vector<std::string> candidates_for(const ReaderItem& item) const;

  void save(const std::filesystem::path& file) const;
  static ReaderModel load(const std::filesystem::path& file, std::shared_ptr<const EmbeddingTable> text,
                          GlossFn gloss = nullptr);

 private:
  ReaderModel() = default;
  void build(std::uint64_t seed);
  Eigen::MatrixXd embed_text(std::span<const std::string> words) const;
  std::vector<Eigen::Index> gloss_ids_for(std::string_view word) const;
  Eigen::Index emb_column(std::string_view word) const;

  Variant variant_ = Variant::kGa;
  ModelShape shape_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, Eigen::Index> vocab_index_;
  std::vector<std::string> gloss_vocab_;
  std::unordered_map<std::string, Eigen::Index> gloss_index_;
  std::vector<std::vector<Eigen::Index>> vocab_gloss_ids_;
  std::shared_ptr<const EmbeddingTable> text_;
  GlossFn gloss_fn_;

  std::vector<BiGru> passage_enc_;
  std::vector<BiGru> summary_enc_;
  BiGru gloss_enc_;
  nn::Param w_att_;   // bilinear passage attention (2h x 2h)
  nn::Param w_out_;   // GA: W_p, ATT/AMWG: W_pred
  nn::Param w_gloss_; // AMWG gloss attention (2h x 4h)
  nn::Param b_gloss_; // (2h x 1)
  nn::Param cand_emb_;
  nn::Param gloss_emb_;
};

// Top-k of `vocab` by probability, ties broken lexicographically. k larger
// than the vocabulary returns the whole ranking.
std::vector<std::pair<std::string, double>> predict_topk(const ReaderModel& model, const ReaderItem& item,
                                                         std::span<const std::string> vocab, std::size_t k);
std::vector<std::pair<std::string, double>> predict_topk(const ReaderModel& model, const ReaderItem& item,
                                                         const CandidateSet& prepared, std::size_t k);

}  // namespace recam::readers
