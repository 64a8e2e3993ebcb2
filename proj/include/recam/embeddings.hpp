#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "recam/error.hpp"

namespace recam {

// Static word vectors; lookups are case-normalized.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(Eigen::Index dim) : dim_(dim) {}

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  // Insertion order.
  const std::vector<std::string>& words() const { return words_; }

  // Returns false (and keeps the existing vector) for duplicates.
  bool add(std::string_view word, Eigen::VectorXd vec);
  bool contains(std::string_view word) const;
  const Eigen::VectorXd* find(std::string_view word) const;
  // Throws OovError.
  const Eigen::VectorXd& at(std::string_view word) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

// Text format: one "token v1 ... vd" record per line; dim from the first line.
EmbeddingTable load_embeddings(const std::filesystem::path& file);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& file);

// Cosine similarity. Throws DomainError on a zero vector.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& u,
                                 const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  if (u.size() != v.size()) throw DomainError("cosine of vectors with different lengths");
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) throw DomainError("similarity undefined for zero vector");
  return u.dot(v) / (nu * nv);
}

// Per-token contextual vectors produced by an external encoder. Keys are
// (document id, segment, token index) where segment is "passage" or
// "summary" and the index follows the corpus tokenizer.
class ContextualVectors {
 public:
  using Key = std::tuple<std::string, std::string, std::size_t>;

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  void add(std::string doc_id, std::string segment, std::size_t token_index, Eigen::VectorXd vec);
  const Eigen::VectorXd* find(std::string_view doc_id, std::string_view segment,
                              std::size_t token_index) const;

 private:
  Eigen::Index dim_ = 0;
  std::map<Key, Eigen::VectorXd> vectors_;
};

// Line-delimited {"doc_id","token_index","vector":[...]} with optional
// "segment" (default "passage").
ContextualVectors load_contextual(const std::filesystem::path& file);

// Contextual arm of the similarity query: the target token of `doc_id`'s
// summary compared with that document's passage tokens.
struct ContextualQuery {
  const ContextualVectors* vectors = nullptr;
  std::string doc_id;
  std::size_t summary_index = 0;
};

// Maximum cosine between `word` and every in-table passage token; with a
// contextual query, the maximum over both sources. Returns -1 when nothing
// is comparable. Throws OovError when `word` has no static vector.
double max_similarity_to_passage(std::string_view word, std::span<const std::string> passage_tokens,
                                 const EmbeddingTable& table,
                                 const ContextualQuery* ctx = nullptr);

}  // namespace recam
