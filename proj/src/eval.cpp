#include "recam/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam {

std::size_t gold_rank(const RankedPrediction& p) {
  for (std::size_t i = 0; i < p.ranking.size(); ++i) {
    if (p.ranking[i] == p.gold) return i + 1;
  }
  return 0;
}

double accuracy(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) throw ValidationError("prediction/gold length mismatch", "length_mismatch");
  if (gold.empty()) throw ValidationError("no items to score", "empty");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i];
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double mrr(std::span<const RankedPrediction> preds) {
  if (preds.empty()) throw ValidationError("no items to score", "empty");
  double sum = 0;
  for (const auto& p : preds) {
    const auto r = gold_rank(p);
    if (r) sum += 1.0 / static_cast<double>(r);
  }
  return sum / static_cast<double>(preds.size());
}

double recall_at_k(std::span<const RankedPrediction> preds, std::size_t k) {
  if (k == 0) throw ValidationError("recall@k needs k >= 1");
  if (preds.empty()) throw ValidationError("no items to score", "empty");
  std::size_t hits = 0;
  for (const auto& p : preds) {
    const auto r = gold_rank(p);
    hits += r != 0 && r <= k;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

std::vector<PredictionRecord> predict_questions(const readers::ReaderModel& model, std::span<const Question> questions) {
  std::vector<PredictionRecord> out;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto item = reader_item(questions[i], std::to_string(i));
    const auto set = model.prepare(item.options);
    const Eigen::VectorXd probs = model.probabilities(item, set);
    std::vector<std::size_t> order(item.options.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return probs(static_cast<Eigen::Index>(a)) > probs(static_cast<Eigen::Index>(b));
    });
    PredictionRecord rec;
    rec.id = item.id;
    rec.label = static_cast<int>(order.front());
    std::vector<std::string> ranking;
    for (auto o : order) ranking.push_back(item.options[o]);
    rec.ranking = std::move(ranking);
    out.push_back(std::move(rec));
  }
  return out;
}

EvalReport evaluate_predictions(std::span<const PredictionRecord> preds, std::span<const Question> questions) {
  if (questions.empty()) throw ValidationError("no questions to evaluate", "empty");
  std::map<std::string, const PredictionRecord*> by_id;
  for (const auto& p : preds) {
    if (!by_id.emplace(p.id, &p).second) throw ValidationError("duplicate prediction id " + p.id, "duplicate_id");
  }
  std::vector<int> predicted, gold;
  std::vector<RankedPrediction> ranked;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const std::string id = std::to_string(i);
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("no prediction for question " + id, "missing_prediction");
    const PredictionRecord& p = *it->second;
    const Question& q = questions[i];
    const auto& gold_word = q.options.at(static_cast<std::size_t>(q.label));
    int label = -1;
    if (p.label) {
      label = *p.label;
    } else if (p.ranking && !p.ranking->empty()) {
      const std::string top = text::to_lower(p.ranking->front());
      for (std::size_t o = 0; o < q.options.size(); ++o) {
        if (text::to_lower(q.options[o]) == top) label = static_cast<int>(o);
      }
    } else {
      throw ValidationError("prediction " + id + " has neither label nor ranking", "missing_field");
    }
    predicted.push_back(label);
    gold.push_back(q.label);
    if (p.ranking) {
      RankedPrediction r{id, {}, text::to_lower(gold_word)};
      for (const auto& w : *p.ranking) r.ranking.push_back(text::to_lower(w));
      ranked.push_back(std::move(r));
    }
    by_id.erase(it);
  }
  if (!by_id.empty()) throw ValidationError("prediction for unknown question " + by_id.begin()->first, "unknown_question");
  EvalReport r;
  r.n_items = questions.size();
  r.accuracy = accuracy(predicted, gold);
  if (!ranked.empty()) {
    r.mrr = mrr(ranked);
    r.recall_1 = recall_at_k(ranked, 1);
    r.recall_5 = recall_at_k(ranked, 5);
    r.recall_10 = recall_at_k(ranked, 10);
  }
  return r;
}

EvalReport evaluate_model(const readers::ReaderModel& model, std::span<const Question> questions,
                          std::string train_source, std::string test_source) {
  EvalReport r = evaluate_predictions(predict_questions(model, questions), questions);
  r.train_source = std::move(train_source);
  r.test_source = std::move(test_source);
  return r;
}

EvalReport cross_eval(const readers::ReaderModel& model, std::span<const Question> test, std::string train_source,
                      std::string test_source, std::optional<double> same_task_accuracy) {
  EvalReport r = evaluate_model(model, test, std::move(train_source), std::move(test_source));
  if (same_task_accuracy) {
    r.same_task_accuracy = same_task_accuracy;
    r.delta = r.accuracy - *same_task_accuracy;
  }
  return r;
}

std::string format_cross(double cross_accuracy, double delta) {
  // Round in tenths of a percent so 0.918 - 0.951 prints 3.3, not 3.2999.
  const long acc = std::lround(cross_accuracy * 1000.0);
  const long d = std::lround(delta * 1000.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%ld.%ld (%s %ld.%ld)", acc / 10, acc % 10, d < 0 ? "↓" : "↑",
                std::labs(d) / 10, std::labs(d) % 10);
  return buf;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open predictions: " + file.string());
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PredictionRecord r;
      const auto& id = j.at("id");
      r.id = id.is_string() ? id.get<std::string>() : id.dump();
      if (j.contains("label")) r.label = j["label"].get<int>();
      if (j.contains("ranking")) r.ranking = j["ranking"].get<std::vector<std::string>>();
      if (!r.label && !r.ranking) throw ParseError(file.string(), n, "record needs \"label\" or \"ranking\"");
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file.string(), n, e.what());
    }
  }
  return out;
}

void write_predictions(const std::filesystem::path& file, std::span<const PredictionRecord> preds) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ResourceError("cannot write predictions: " + file.string());
  for (const auto& p : preds) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    if (p.label) j["label"] = *p.label;
    if (p.ranking) j["ranking"] = *p.ranking;
    out << j.dump() << '\n';
  }
}

std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["mrr"] = r.mrr;
  j["recall@1"] = r.recall_1;
  j["recall@5"] = r.recall_5;
  j["recall@10"] = r.recall_10;
  j["n_items"] = r.n_items;
  j["provenance"] = {{"train_source", r.train_source}, {"test_source", r.test_source}};
  if (r.same_task_accuracy) j["same_task_accuracy"] = *r.same_task_accuracy;
  if (r.delta) {
    j["delta"] = *r.delta;
    j["cross"] = format_cross(r.accuracy, *r.delta);
  }
  return j.dump(2);
}

std::string report_table(const EvalReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  rows.emplace_back("accuracy", num(r.accuracy));
  rows.emplace_back("mrr", num(r.mrr));
  rows.emplace_back("recall@1", num(r.recall_1));
  rows.emplace_back("recall@5", num(r.recall_5));
  rows.emplace_back("recall@10", num(r.recall_10));
  rows.emplace_back("items", std::to_string(r.n_items));
  if (!r.train_source.empty()) rows.emplace_back("train", r.train_source);
  if (!r.test_source.empty()) rows.emplace_back("test", r.test_source);
  if (r.same_task_accuracy) rows.emplace_back("same-task acc", num(*r.same_task_accuracy));
  if (r.delta) rows.emplace_back("acc. cross", format_cross(r.accuracy, *r.delta));
  std::size_t w = 0;
  for (const auto& [k, v] : rows) w = std::max(w, k.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << k << std::string(w - k.size() + 2, ' ') << v << '\n';
  return out.str();
}

}  // namespace recam
