#include "recam/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>

#include "json.hpp"
#include "recam/text.hpp"

namespace recam {

bool EmbeddingTable::add(std::string_view word, Eigen::VectorXd vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) throw DomainError("embedding dimension mismatch for '" + std::string(word) + "'");
  std::string key = text::to_lower(word);
  if (vectors_.contains(key)) return false;
  words_.push_back(key);
  vectors_.emplace(std::move(key), std::move(vec));
  return true;
}

bool EmbeddingTable::contains(std::string_view word) const { return find(word) != nullptr; }

const Eigen::VectorXd* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(text::to_lower(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

const Eigen::VectorXd& EmbeddingTable::at(std::string_view word) const {
  const auto* v = find(word);
  if (v == nullptr) throw OovError(std::string(word));
  return *v;
}

EmbeddingTable load_embeddings(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open embedding file: " + file.string());
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = text::split_ws(line);
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0;
      const auto& f = fields[i];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(file.string(), lineno, "bad number '" + f + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) throw ParseError(file.string(), lineno, "token without vector");
    if (table.dim() != 0 && static_cast<Eigen::Index>(values.size()) != table.dim()) {
      throw ParseError(file.string(), lineno,
                       "expected " + std::to_string(table.dim()) + " values, got " +
                           std::to_string(values.size()));
    }
    table.add(fields[0], Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                           static_cast<Eigen::Index>(values.size())));
  }
  if (table.size() == 0) throw ParseError(file.string(), lineno, "empty embedding file");
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ResourceError("cannot write embedding file: " + file.string());
  out << std::setprecision(17);
  for (const auto& w : table.words()) {
    out << w;
    for (double v : table.at(w)) out << ' ' << v;
    out << '\n';
  }
}

void ContextualVectors::add(std::string doc_id, std::string segment, std::size_t token_index,
                            Eigen::VectorXd vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) throw DomainError("contextual vector dimension mismatch");
  vectors_.insert_or_assign(Key{std::move(doc_id), std::move(segment), token_index}, std::move(vec));
}

const Eigen::VectorXd* ContextualVectors::find(std::string_view doc_id, std::string_view segment,
                                               std::size_t token_index) const {
  auto it = vectors_.find(Key{std::string(doc_id), std::string(segment), token_index});
  return it == vectors_.end() ? nullptr : &it->second;
}

ContextualVectors load_contextual(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open contextual vector file: " + file.string());
  ContextualVectors ctx;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto vec = j.at("vector").get<std::vector<double>>();
      if (vec.empty()) throw ParseError(file.string(), lineno, "empty vector");
      ctx.add(j.at("doc_id").get<std::string>(), j.value("segment", std::string("passage")),
              j.at("token_index").get<std::size_t>(),
              Eigen::Map<const Eigen::VectorXd>(vec.data(), static_cast<Eigen::Index>(vec.size())));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file.string(), lineno, e.what());
    } catch (const DomainError& e) {
      throw ParseError(file.string(), lineno, e.what());
    }
  }
  return ctx;
}

double max_similarity_to_passage(std::string_view word, std::span<const std::string> passage_tokens,
                                 const EmbeddingTable& table, const ContextualQuery* ctx) {
  const Eigen::VectorXd& target = table.at(word);
  double best = -1.0;
  if (target.norm() > 0) {
    for (const auto& tok : passage_tokens) {
      const auto* v = table.find(tok);
      if (v == nullptr || v->norm() == 0) continue;
      best = std::max(best, cosine(target, *v));
    }
  }
  if (ctx != nullptr && ctx->vectors != nullptr) {
    const auto* q = ctx->vectors->find(ctx->doc_id, "summary", ctx->summary_index);
    if (q != nullptr && q->norm() > 0) {
      for (std::size_t i = 0; i < passage_tokens.size(); ++i) {
        const auto* v = ctx->vectors->find(ctx->doc_id, "passage", i);
        if (v == nullptr || v->norm() == 0) continue;
        best = std::max(best, cosine(*q, *v));
      }
    }
  }
  return best;
}

}  // namespace recam
