#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "recam/qgen.hpp"

namespace recam {

enum class Difficulty { kEasy, kMedium, kHard };

std::string_view difficulty_name(Difficulty d);
std::optional<Difficulty> parse_difficulty(std::string_view s);

// Character offsets in code points, end exclusive.
using Span = std::pair<std::size_t, std::size_t>;

struct AnnotationRecord {
  std::string question_id;
  std::string annotator_id;
  int chosen_option = 0;
  std::optional<Span> passage_span;
  std::optional<Span> question_span;
  Difficulty difficulty = Difficulty::kMedium;
  std::string timestamp;
};

inline constexpr double kAnnotatorAccuracyFloor = 0.4;

nlohmann::ordered_json to_json(const AnnotationRecord& r);
// Throws ValidationError with reason missing_field / invalid_difficulty /
// option_out_of_range on malformed input.
AnnotationRecord record_from_json(const nlohmann::json& j);

// Submission checks against the question; throws ValidationError with one of
// empty_passage_span, empty_question_span, span_out_of_range,
// option_out_of_range.
void validate_record(const AnnotationRecord& r, const Question& q);

struct AnnotatorStats {
  std::size_t n = 0;
  std::size_t correct = 0;
  double accuracy = 0;
};

struct SelectionResult {
  std::set<std::string> kept;
  std::map<std::string, std::string> rejected;  // question id -> reason
  std::map<std::string, AnnotatorStats> annotator_stats;
  std::size_t dropped_low_accuracy = 0;
  std::size_t dropped_empty_span = 0;
  std::size_t dropped_easy_wrong = 0;
};

// Question ids are zero-based indices into `questions`. Throws
// ValidationError when a record names an unknown question.
SelectionResult select(std::span<const AnnotationRecord> records, std::span<const Question> questions);
nlohmann::ordered_json to_json(const SelectionResult& s);

// Question store plus an append-only JSONL record log. Resubmission by the
// same annotator replaces the earlier record.
class AnnotationStore {
 public:
  explicit AnnotationStore(std::vector<Question> questions, std::optional<std::filesystem::path> log = std::nullopt);

  std::size_t question_count() const { return questions_.size(); }
  // Throws NotFoundError.
  const Question& question(const std::string& id) const;
  // First question (by id order) the annotator has not answered.
  std::optional<std::string> next_for(const std::string& annotator) const;

  // Throws NotFoundError / ValidationError. Fills in a timestamp if absent.
  AnnotationRecord submit(AnnotationRecord record);

  // Snapshot ordered by (question index, annotator).
  std::vector<AnnotationRecord> records() const;
  SelectionResult selection() const;

  // Rewrites the log with one line per live record.
  void compact();
  std::size_t log_lines() const;

 private:
  std::size_t index_of(const std::string& id) const;

  std::vector<Question> questions_;
  std::optional<std::filesystem::path> log_path_;
  std::unique_ptr<std::ofstream> log_;
  std::size_t log_lines_ = 0;
  std::map<std::pair<std::size_t, std::string>, AnnotationRecord> records_;
  mutable std::shared_mutex mu_;
};

// JSON view of a question for annotators (no label).
nlohmann::ordered_json question_payload(const std::string& id, const Question& q);

}  // namespace recam
