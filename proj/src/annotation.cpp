#include "recam/annotation.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>

#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam {

std::string_view difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy:
      return "easy";
    case Difficulty::kMedium:
      return "medium";
    case Difficulty::kHard:
      return "hard";
  }
  return "?";
}

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  const std::string l = text::to_lower(s);
  if (l == "easy") return Difficulty::kEasy;
  if (l == "medium") return Difficulty::kMedium;
  if (l == "hard") return Difficulty::kHard;
  return std::nullopt;
}

namespace {

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool empty_span(const std::optional<Span>& s) { return !s || s->first >= s->second; }

std::optional<Span> span_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  const auto& v = j[key];
  try {
    if (v.is_array() && v.size() == 2) return Span{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
    if (v.is_object()) return Span{v.at("start").get<std::size_t>(), v.at("end").get<std::size_t>()};
  } catch (const nlohmann::json::exception&) {
  }
  throw ValidationError(std::string(key) + " must be [start, end] with nonnegative offsets", "missing_field");
}

}  // namespace

nlohmann::ordered_json to_json(const AnnotationRecord& r) {
  nlohmann::ordered_json j;
  j["question_id"] = r.question_id;
  j["annotator_id"] = r.annotator_id;
  j["chosen_option"] = r.chosen_option;
  j["passage_span"] = r.passage_span ? nlohmann::ordered_json{r.passage_span->first, r.passage_span->second}
                                     : nlohmann::ordered_json(nullptr);
  j["question_span"] = r.question_span ? nlohmann::ordered_json{r.question_span->first, r.question_span->second}
                                       : nlohmann::ordered_json(nullptr);
  j["difficulty"] = difficulty_name(r.difficulty);
  j["timestamp"] = r.timestamp;
  return j;
}

AnnotationRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("annotation must be a JSON object", "missing_field");
  AnnotationRecord r;
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key) || j[key].is_null()) throw ValidationError(std::string("missing field ") + key, "missing_field");
    return j[key];
  };
  const auto& qid = need("question_id");
  r.question_id = qid.is_string() ? qid.get<std::string>() : qid.dump();
  const auto& aid = need("annotator_id");
  if (!aid.is_string() || aid.get<std::string>().empty()) {
    throw ValidationError("annotator_id must be a nonempty string", "missing_field");
  }
  r.annotator_id = aid.get<std::string>();
  const auto& opt = need("chosen_option");
  if (!opt.is_number_integer()) throw ValidationError("chosen_option must be an integer", "option_out_of_range");
  r.chosen_option = opt.get<int>();
  const auto& diff = need("difficulty");
  const auto d = diff.is_string() ? parse_difficulty(diff.get<std::string>()) : std::nullopt;
  if (!d) throw ValidationError("difficulty must be easy|medium|hard", "invalid_difficulty");
  r.difficulty = *d;
  r.passage_span = span_from(j, "passage_span");
  r.question_span = span_from(j, "question_span");
  if (j.contains("timestamp") && j["timestamp"].is_string()) r.timestamp = j["timestamp"].get<std::string>();
  return r;
}

void validate_record(const AnnotationRecord& r, const Question& q) {
  if (r.chosen_option < 0 || r.chosen_option >= static_cast<int>(q.options.size())) {
    throw ValidationError("chosen_option out of range", "option_out_of_range");
  }
  if (empty_span(r.passage_span)) throw ValidationError("passage span is empty", "empty_passage_span");
  if (empty_span(r.question_span)) throw ValidationError("question span is empty", "empty_question_span");
  if (r.passage_span->second > text::utf8_length(q.passage)) {
    throw ValidationError("passage span exceeds the passage", "span_out_of_range");
  }
  if (r.question_span->second > text::utf8_length(q.question)) {
    throw ValidationError("question span exceeds the question", "span_out_of_range");
  }
}

SelectionResult select(std::span<const AnnotationRecord> records, std::span<const Question> questions) {
  SelectionResult res;
  auto label_of = [&](const AnnotationRecord& r) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(r.question_id, &used);
      if (used != r.question_id.size()) throw std::invalid_argument("id");
    } catch (const std::exception&) {
      throw ValidationError("record names unknown question " + r.question_id, "unknown_question");
    }
    if (idx >= questions.size()) throw ValidationError("record names unknown question " + r.question_id, "unknown_question");
    return std::pair{idx, questions[idx].label};
  };

  for (const auto& r : records) {
    auto& st = res.annotator_stats[r.annotator_id];
    ++st.n;
    if (r.chosen_option == label_of(r).second) ++st.correct;
  }
  for (auto& [id, st] : res.annotator_stats) st.accuracy = static_cast<double>(st.correct) / static_cast<double>(st.n);

  std::vector<bool> annotated(questions.size(), false), keep(questions.size(), false);
  for (const auto& r : records) {
    const auto [idx, label] = label_of(r);
    annotated[idx] = true;
    const bool correct = r.chosen_option == label;
    if (!(res.annotator_stats[r.annotator_id].accuracy > kAnnotatorAccuracyFloor)) {
      ++res.dropped_low_accuracy;
    } else if (empty_span(r.passage_span) || empty_span(r.question_span)) {
      ++res.dropped_empty_span;
    } else if (r.difficulty == Difficulty::kEasy && !correct) {
      ++res.dropped_easy_wrong;
    } else if (correct) {
      keep[idx] = true;
    }
  }
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const std::string id = std::to_string(i);
    if (keep[i]) {
      res.kept.insert(id);
    } else {
      res.rejected[id] = annotated[i] ? "no_valid_correct_record" : "no_annotations";
    }
  }
  return res;
}

nlohmann::ordered_json to_json(const SelectionResult& s) {
  nlohmann::ordered_json j;
  j["kept"] = nlohmann::ordered_json::array();
  // Numeric order for readability.
  std::vector<std::string> kept(s.kept.begin(), s.kept.end());
  std::sort(kept.begin(), kept.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& id : kept) j["kept"].push_back(id);
  j["rejected"] = nlohmann::ordered_json::object();
  for (const auto& [id, reason] : s.rejected) j["rejected"][id] = reason;
  j["annotator_stats"] = nlohmann::ordered_json::object();
  for (const auto& [id, st] : s.annotator_stats) {
    j["annotator_stats"][id] = {{"n", st.n}, {"correct", st.correct}, {"accuracy", st.accuracy}};
  }
  j["dropped"] = {{"low_accuracy", s.dropped_low_accuracy},
                  {"empty_span", s.dropped_empty_span},
                  {"easy_wrong", s.dropped_easy_wrong}};
  return j;
}

nlohmann::ordered_json question_payload(const std::string& id, const Question& q) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["article"] = q.passage;
  j["question"] = q.question;
  j["options"] = q.options;
  return j;
}

AnnotationStore::AnnotationStore(std::vector<Question> questions, std::optional<std::filesystem::path> log)
    : questions_(std::move(questions)), log_path_(std::move(log)) {
  if (!log_path_) return;
  if (std::filesystem::exists(*log_path_)) {
    std::ifstream in(*log_path_);
    if (!in) throw ResourceError("cannot read annotation log: " + log_path_->string());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (text::trim(line).empty()) continue;
      try {
        AnnotationRecord r = record_from_json(nlohmann::json::parse(line));
        const std::size_t idx = index_of(r.question_id);
        records_[{idx, r.annotator_id}] = std::move(r);
        ++log_lines_;
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(log_path_->string(), n, e.what());
      } catch (const Error& e) {
        throw ParseError(log_path_->string(), n, e.what());
      }
    }
  }
  log_ = std::make_unique<std::ofstream>(*log_path_, std::ios::app);
  if (!*log_) throw ResourceError("cannot open annotation log: " + log_path_->string());
}

std::size_t AnnotationStore::index_of(const std::string& id) const {
  std::size_t idx = 0, used = 0;
  try {
    idx = std::stoul(id, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != id.size() || idx >= questions_.size()) throw NotFoundError("unknown question " + id);
  return idx;
}

const Question& AnnotationStore::question(const std::string& id) const { return questions_[index_of(id)]; }

std::optional<std::string> AnnotationStore::next_for(const std::string& annotator) const {
  std::shared_lock lock(mu_);
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    if (!records_.count({i, annotator})) return std::to_string(i);
  }
  return std::nullopt;
}

AnnotationRecord AnnotationStore::submit(AnnotationRecord record) {
  const std::size_t idx = index_of(record.question_id);
  record.question_id = std::to_string(idx);
  validate_record(record, questions_[idx]);
  if (record.timestamp.empty()) record.timestamp = now_utc();
  std::unique_lock lock(mu_);
  if (log_) {
    *log_ << to_json(record).dump() << '\n';
    log_->flush();
    if (!*log_) throw ResourceError("failed to append to annotation log");
    ++log_lines_;
  }
  records_[{idx, record.annotator_id}] = record;
  return record;
}

std::vector<AnnotationRecord> AnnotationStore::records() const {
  std::shared_lock lock(mu_);
  std::vector<AnnotationRecord> out;
  for (const auto& [key, r] : records_) out.push_back(r);
  return out;
}

SelectionResult AnnotationStore::selection() const {
  const auto snapshot = records();
  return select(snapshot, questions_);
}

void AnnotationStore::compact() {
  std::unique_lock lock(mu_);
  if (!log_path_) return;
  const auto tmp = std::filesystem::path(log_path_->string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    for (const auto& [key, r] : records_) out << to_json(r).dump() << '\n';
    if (!out) throw ResourceError("failed writing " + tmp.string());
  }
  log_.reset();
  std::filesystem::rename(tmp, *log_path_);
  log_ = std::make_unique<std::ofstream>(*log_path_, std::ios::app);
  log_lines_ = records_.size();
}

std::size_t AnnotationStore::log_lines() const {
  std::shared_lock lock(mu_);
  return log_lines_;
}

}  // namespace recam
