#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recam/qgen.hpp"
#include "recam/readers/model.hpp"

namespace recam {

struct RankedPrediction {
  std::string id;
  std::vector<std::string> ranking;  // best first
  std::string gold;
};

// 1-based rank of the gold word, 0 when absent.
std::size_t gold_rank(const RankedPrediction& p);

// Throws ValidationError on a length mismatch or empty input.
double accuracy(std::span<const int> predicted, std::span<const int> gold);
// Gold-absent items contribute 0. Throws ValidationError when empty.
double mrr(std::span<const RankedPrediction> preds);
// Throws ValidationError when k == 0 or preds is empty.
double recall_at_k(std::span<const RankedPrediction> preds, std::size_t k);

struct EvalReport {
  double accuracy = 0;
  double mrr = 0;
  double recall_1 = 0;
  double recall_5 = 0;
  double recall_10 = 0;
  std::size_t n_items = 0;
  std::string train_source;
  std::string test_source;
  std::optional<double> same_task_accuracy;
  std::optional<double> delta;  // cross - same; a drop is negative
};

// 5-way accuracy plus ranking metrics over each question's options.
EvalReport evaluate_model(const readers::ReaderModel& model, std::span<const Question> questions,
                          std::string train_source = "", std::string test_source = "");

// evaluate_model with provenance and, when `same_task_accuracy` is given,
// the delta against it.
EvalReport cross_eval(const readers::ReaderModel& model, std::span<const Question> test, std::string train_source,
                      std::string test_source, std::optional<double> same_task_accuracy = std::nullopt);

// "91.8 (↓ 3.3)" from fractions 0.918 and delta -0.033; gains use "↑".
std::string format_cross(double cross_accuracy, double delta);

// Prediction file records: {"id", "label"} or {"id", "ranking": [...]}.
struct PredictionRecord {
  std::string id;
  std::optional<int> label;
  std::optional<std::vector<std::string>> ranking;
};

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file);
void write_predictions(const std::filesystem::path& file, std::span<const PredictionRecord> preds);

// Question ids are zero-based line indices ("0", "1", ...). Every question
// needs a prediction; unknown ids are a ValidationError.
EvalReport evaluate_predictions(std::span<const PredictionRecord> preds, std::span<const Question> questions);

// Label and option ranking for every question.
std::vector<PredictionRecord> predict_questions(const readers::ReaderModel& model, std::span<const Question> questions);

std::string report_json(const EvalReport& r);
std::string report_table(const EvalReport& r);

}  // namespace recam
