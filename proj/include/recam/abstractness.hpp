#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recam/embeddings.hpp"
#include "recam/error.hpp"
#include "recam/lexicon.hpp"
#include "recam/nn.hpp"

namespace recam {

// ---------------------------------------------------------------------------
// Imperceptibility: regression from a fixed word vector to a scaled
// concreteness rating.

inline constexpr int kMinRating = 158;  // most abstract
inline constexpr int kMaxRating = 670;  // most concrete

struct RatingRecord {
  std::string word;
  int raw_rating = kMinRating;
};

// Affine map of [158, 670] onto [0, 1]. Throws DomainError outside the range.
double scale_rating(int raw);

// "word<TAB>raw_rating" per line.
std::vector<RatingRecord> load_ratings(const std::filesystem::path& file);

// Two ReLU hidden layers and a sigmoid output unit.
class RegressionScorer {
 public:
  RegressionScorer() = default;
  RegressionScorer(Eigen::Index input_dim, Eigen::Index hidden1, Eigen::Index hidden2);

  Eigen::Index input_dim() const { return w1_.value.cols(); }
  Eigen::Index hidden1() const { return w1_.value.rows(); }
  Eigen::Index hidden2() const { return w2_.value.rows(); }

  void init(nn::Rng& rng);

  // Sigmoid outputs for the columns of `x` (input_dim x n).
  Eigen::VectorXd forward(const Eigen::MatrixXd& x) const;
  double forward_one(const Eigen::VectorXd& x) const;

  // Mean squared error against `y`; accumulates d(mse)/d(param) into grads.
  double mse_and_gradients(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
  double mse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const;

  std::vector<nn::Param*> parameters() { return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_}; }
  std::vector<const nn::Param*> parameters() const { return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_}; }

  void save(const std::filesystem::path& file) const;
  static RegressionScorer load(const std::filesystem::path& file);

 private:
  nn::Param w1_, b1_, w2_, b2_, w3_, b3_;
};

struct ScorerHyper {
  Eigen::Index hidden1 = 128;
  Eigen::Index hidden2 = 64;
  double lr = 1e-3;
  int epochs = 200;
  int batch = 32;
  std::uint64_t seed = 0;
};

struct ScorerTrainResult {
  RegressionScorer scorer;
  double train_mse = 0;
  std::size_t dropped_oov = 0;
  std::vector<double> epoch_mse;
};

// Adam on mean squared error against scale_rating(raw). Records whose word
// has no vector are dropped and counted. Throws ValidationError when nothing
// remains.
ScorerTrainResult train_scorer(std::span<const RatingRecord> data, const EmbeddingTable& table,
                               const ScorerHyper& hyper);

inline constexpr std::size_t kReferenceTrainSize = 2148;
inline constexpr std::size_t kReferenceTestSize = 1877;

struct RatingSplit {
  std::vector<RatingRecord> train;
  std::vector<RatingRecord> test;
};

// Seeded shuffle, then the first 2,148 records train and the next 1,877
// test when at least that many are given; smaller sets keep the same ratio.
RatingSplit split_ratings(std::span<const RatingRecord> data, std::uint64_t seed);

// Pearson between predictions and scaled ratings over in-vocabulary records.
double heldout_pearson(std::span<const RatingRecord> test, const RegressionScorer& scorer,
                       const EmbeddingTable& table);

// Throws OovError.
double imperceptibility(std::string_view word, const RegressionScorer& scorer,
                        const EmbeddingTable& table);

// Sample Pearson correlation. Throws DomainError on length mismatch, fewer
// than two points, or zero variance.
template <typename Scalar>
Scalar pearson(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("pearson needs two equal-length series of length >= 2");
  Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> xs(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> ys(y.data(), static_cast<Eigen::Index>(y.size()));
  const auto dx = (xs - xs.mean()).eval();
  const auto dy = (ys - ys.mean()).eval();
  const Scalar sxx = dx.square().sum();
  const Scalar syy = dy.square().sum();
  if (sxx == Scalar(0) || syy == Scalar(0)) throw DomainError("correlation undefined for zero variance");
  return (dx * dy).sum() / std::sqrt(sxx * syy);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson<double>(std::span<const double>(x), std::span<const double>(y));
}

// ---------------------------------------------------------------------------
// Nonspecificity: adapted Lesk sense choice followed by hypernym depth.

// Context separator: phrases never extend across it.
inline constexpr std::string_view kSegmentBreak = "";

struct SenseChoice {
  std::string word;
  std::string synset_id;
  double score = 0;
};

// Sum of squared lengths of the maximal shared phrases, found greedily
// longest-first; each signature token is matched at most once. Empty
// strings in either sequence are phrase boundaries.
double lesk_overlap(std::span<const std::string> signature, std::span<const std::string> context);

// Content lemmas of the sense's gloss and examples plus those of its
// direct hypernyms and hyponyms, one segment per text.
std::vector<std::string> extended_signature(const Synset& synset, const Lexicon& lex);

// Restricted to `pos` when given. Ties go to the lowest sense rank.
// Throws LookupError when the word has no sense.
SenseChoice disambiguate(std::string_view word, std::span<const std::string> context,
                         const Lexicon& lex, std::optional<Pos> pos = std::nullopt);

// Depth of the sense chosen against summary + passage. `pos` must be noun or
// verb (DomainError otherwise).
int nonspecificity(std::string_view word, Pos pos, std::span<const std::string> summary_lemmas,
                   std::span<const std::string> passage_lemmas, const Lexicon& lex);

}  // namespace recam
