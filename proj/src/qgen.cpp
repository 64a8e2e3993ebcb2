#include "recam/qgen.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam {

std::string_view subtask_name(Subtask s) {
  return s == Subtask::kImperceptibility ? "imperceptibility" : "nonspecificity";
}

Subtask parse_subtask(std::string_view s) {
  const std::string l = text::to_lower(s);
  if (l == "imperceptibility" || l == "1") return Subtask::kImperceptibility;
  if (l == "nonspecificity" || l == "2") return Subtask::kNonspecificity;
  throw UsageError("unknown subtask '" + std::string(s) + "' (expected imperceptibility|nonspecificity)");
}

TargetScore imperceptibility_score(const RegressionScorer& scorer, const EmbeddingTable& table) {
  return [&scorer, &table](const AnalyzedPair& pair, std::size_t index) -> std::optional<double> {
    const Token& tok = pair.summary.at(index);
    for (const std::string* w : {&tok.lower, &tok.lemma}) {
      if (table.contains(*w)) return imperceptibility(*w, scorer, table);
    }
    return std::nullopt;
  };
}

TargetScore nonspecificity_score(const Lexicon& lex) {
  return [&lex](const AnalyzedPair& pair, std::size_t index) -> std::optional<double> {
    const Token& tok = pair.summary.at(index);
    const auto summary = lemmas_of(pair.summary);
    const auto passage = lemmas_of(pair.passage);
    try {
      return nonspecificity(tok.lower, tok.pos, summary, passage, lex);
    } catch (const LookupError&) {
      return std::nullopt;
    }
  };
}

namespace {

bool pos_allowed(Subtask subtask, Pos pos) {
  if (subtask == Subtask::kNonspecificity) return pos == Pos::kNoun || pos == Pos::kVerb;
  return is_content(pos);
}

bool below_threshold(Subtask subtask, double score) {
  if (subtask == Subtask::kNonspecificity) return score < kNonspecificityThreshold;
  return score < kImperceptibilityThreshold;
}

std::vector<std::string> lower_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& t : text::tokenize(s)) out.push_back(text::to_lower(t.surface));
  return out;
}

}  // namespace

QuestionDraft make_draft(const AnalyzedPair& pair, std::size_t index, Subtask subtask, double score) {
  const Token& tok = pair.summary.at(index);
  QuestionDraft d;
  d.pair_id = pair.pair.id;
  d.target_surface = tok.surface;
  d.target_word = tok.lower;
  d.target_lemma = tok.lemma;
  d.target_pos = tok.pos;
  d.token_index = index;
  d.subtask = subtask;
  d.score = score;
  const std::string& summary = pair.pair.summary;
  const std::size_t len = text::utf8_length(tok.surface);
  d.question_text = text::utf8_substr(summary, 0, tok.char_offset) + std::string(text::kPlaceholder) +
                    text::utf8_substr(summary, tok.char_offset + len, std::string::npos);
  d.passage_text = pair.pair.passage;
  d.passage_words = lowers_of(pair.passage);
  d.question_words = lowers_of(pair.summary);
  d.question_words[index] = std::string(text::kPlaceholder);
  return d;
}

std::vector<QuestionDraft> select_targets(const AnalyzedPair& pair, Subtask subtask, const TargetScore& score,
                                          SelectStats* stats) {
  std::vector<QuestionDraft> out;
  for (std::size_t i = 0; i < pair.summary.size(); ++i) {
    if (!pos_allowed(subtask, pair.summary[i].pos)) continue;
    if (stats) ++stats->candidates;
    const auto s = score(pair, i);
    if (!s) {
      if (stats) ++stats->unscored;
      continue;
    }
    if (below_threshold(subtask, *s)) out.push_back(make_draft(pair, i, subtask, *s));
  }
  return out;
}

bool filter_lemma(const QuestionDraft& draft, std::span<const Token> passage) {
  for (const auto& t : passage) {
    if (t.lemma == draft.target_lemma) return false;
  }
  return true;
}

bool filter_synonym_antonym(const QuestionDraft& draft, std::span<const Token> passage, const Lexicon& lex) {
  const auto pool = synonym_antonym_pool(draft.target_word, lex);
  if (pool.empty()) return true;
  for (const auto& t : passage) {
    if (pool.count(t.lemma)) return false;
  }
  return true;
}

bool filter_similarity(const QuestionDraft& draft, std::span<const Token> passage, const EmbeddingTable& table,
                       const ContextualVectors* ctx, bool* oov) {
  if (oov) *oov = false;
  if (!table.contains(draft.target_word)) {
    if (oov) *oov = true;
    return true;
  }
  const auto words = lowers_of(passage);
  ContextualQuery q{ctx, draft.pair_id, draft.token_index};
  const double sim = max_similarity_to_passage(draft.target_word, words, table, ctx ? &q : nullptr);
  return !(sim > kSimilarityThreshold);
}

readers::ReaderItem reader_item(const QuestionDraft& draft) {
  readers::ReaderItem item;
  item.id = draft.pair_id + "#" + std::to_string(draft.token_index);
  item.passage = draft.passage_words;
  item.summary = draft.question_words;
  item.gold = draft.target_word;
  return item;
}

GenerationResult generate_questions(std::span<const AnalyzedPair> pairs, const TargetScore& score, const Lexicon& lex,
                                    const EmbeddingTable& table, const ContextualVectors* ctx,
                                    std::span<const NamedTrainer> models, const GenerationConfig& cfg) {
  GenerationResult res;
  StageCounts& c = res.counts;
  c.pairs = pairs.size();
  const ContextualVectors* use_ctx = cfg.use_contextual ? ctx : nullptr;
  if (use_ctx == nullptr) {
    res.warnings.push_back("contextual similarity skipped: no contextual vectors supplied");
  }
  for (const auto& pair : pairs) {
    SelectStats st;
    auto drafts = select_targets(pair, cfg.subtask, score, &st);
    c.unscored_tokens += st.unscored;
    c.drafts += drafts.size();
    for (auto& d : drafts) {
      if (!filter_lemma(d, pair.passage)) {
        ++c.rejected_lemma;
        continue;
      }
      if (!filter_synonym_antonym(d, pair.passage, lex)) {
        ++c.rejected_synonym_antonym;
        continue;
      }
      bool oov = false;
      if (!filter_similarity(d, pair.passage, table, use_ctx, &oov)) {
        ++c.rejected_similarity;
        continue;
      }
      if (oov) {
        ++c.similarity_oov;
        res.warnings.push_back("similarity not assessed for OOV target '" + d.target_word + "' in " + d.pair_id);
      }
      res.drafts.push_back(std::move(d));
    }
  }
  if (res.drafts.empty()) return res;

  auto dist = generate_distractors(res.drafts, models, lex, table, cfg.distractors);
  res.traces = std::move(dist.traces);
  c.dropped_distractors = dist.dropped;
  for (auto& q : dist.questions) {
    if (q) res.questions.push_back(std::move(*q));
  }
  c.emitted = res.questions.size();
  return res;
}

void write_questions(std::ostream& out, std::span<const Question> questions) {
  for (const auto& q : questions) {
    nlohmann::ordered_json j;
    j["article"] = q.passage;
    j["question"] = q.question;
    for (std::size_t i = 0; i < q.options.size(); ++i) j["option_" + std::to_string(i)] = q.options[i];
    j["label"] = q.label;
    out << j.dump() << '\n';
  }
}

void write_questions(const std::filesystem::path& file, std::span<const Question> questions) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ResourceError("cannot write questions: " + file.string());
  write_questions(out, questions);
}

std::vector<Question> read_questions(std::istream& in, const std::string& name) {
  std::vector<Question> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      Question q;
      q.passage = j.at("article").get<std::string>();
      q.question = j.at("question").get<std::string>();
      for (std::size_t i = 0; i < kOptionCount; ++i) q.options.push_back(j.at("option_" + std::to_string(i)).get<std::string>());
      q.label = j.at("label").get<int>();
      if (j.contains("id")) q.pair_id = j["id"].get<std::string>();
      out.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(name, n, e.what());
    }
    const Question& q = out.back();
    if (q.label < 0 || q.label >= static_cast<int>(kOptionCount)) throw ParseError(name, n, "label out of range");
    if (q.question.find(text::kPlaceholder) == std::string::npos) throw ParseError(name, n, "question has no @placeholder");
  }
  return out;
}

std::vector<Question> read_questions(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ResourceError("cannot open questions: " + file.string());
  return read_questions(in, file.string());
}

readers::ReaderItem reader_item(const Question& q, const std::string& id) {
  readers::ReaderItem item;
  item.id = id;
  item.passage = lower_tokens(q.passage);
  item.summary = lower_tokens(q.question);
  for (const auto& o : q.options) item.options.push_back(text::to_lower(o));
  item.gold = item.options.at(static_cast<std::size_t>(q.label));
  return item;
}

}  // namespace recam
