#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "recam/error.hpp"
#include "recam/qgen.hpp"
#include "recam/text.hpp"

using namespace recam;

namespace {

Lexicon abenomics_lexicon() {
  Lexicon::Builder b;
  auto add = [&](std::string id, Pos pos, std::vector<std::string> lemmas, std::vector<std::string> hyper = {}) {
    Synset s;
    s.id = std::move(id);
    s.pos = pos;
    s.lemmas = std::move(lemmas);
    s.gloss = "gloss";
    s.hypernyms = std::move(hyper);
    b.add(std::move(s));
  };
  add("entity", Pos::kNoun, {"entity"});
  add("objective", Pos::kNoun, {"objective", "aim"}, {"entity"});
  add("risk", Pos::kNoun, {"risk", "peril"}, {"entity"});
  add("economy", Pos::kNoun, {"economy"}, {"entity"});
  add("growth", Pos::kNoun, {"growth"}, {"entity"});
  add("policy", Pos::kNoun, {"policy"}, {"entity"});
  add("pillar", Pos::kNoun, {"pillar"}, {"entity"});
  add("ensure", Pos::kVerb, {"ensure"});
  return std::move(b).build();
}

AnalyzedPair table_one(const Lexicon& lex) {
  DocumentPair p;
  p.id = "t1";
  p.passage =
      "Observers have even named it after him, \"Abenomics\". It is based on three key pillars of monetary policy to "
      "ensure long-term sustainable growth in the world's third-largest economy, with fiscal stimulus and structural "
      "reforms.";
  p.summary = "Abenomics: The objective and the risk.";
  return analyze(p, lex, LexiconTagger(lex));
}

std::size_t index_of(const AnalyzedPair& a, const std::string& lower) {
  for (std::size_t i = 0; i < a.summary.size(); ++i) {
    if (a.summary[i].lower == lower) return i;
  }
  return a.summary.size();
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("Abenomics fixture: objective becomes the placeholder") {
  const Lexicon lex = abenomics_lexicon();
  const auto pair = table_one(lex);
  // Fixture scores: "objective" is abstract, everything else concrete.
  TargetScore score = [](const AnalyzedPair& a, std::size_t i) -> std::optional<double> {
    return a.summary[i].lower == "objective" ? 0.2 : 0.9;
  };
  const auto drafts = select_targets(pair, Subtask::kImperceptibility, score);
  REQUIRE(drafts.size() == 1);
  CHECK(drafts[0].question_text == "Abenomics: The @placeholder and the risk.");
  CHECK(drafts[0].target_word == "objective");
  CHECK(drafts[0].target_pos == Pos::kNoun);
  CHECK(drafts[0].question_words[drafts[0].token_index] == "@placeholder");
  CHECK(filter_lemma(drafts[0], pair.passage));
  CHECK(filter_synonym_antonym(drafts[0], pair.passage, lex));
}

TEST_CASE("imperceptibility threshold is strict and skips function words") {
  const Lexicon lex = abenomics_lexicon();
  const auto pair = table_one(lex);
  const std::size_t obj = index_of(pair, "objective");
  const std::size_t the = index_of(pair, "the");
  auto fixed = [&](double at_obj) {
    return TargetScore([=](const AnalyzedPair&, std::size_t i) -> std::optional<double> {
      return i == obj ? at_obj : (i == the ? 0.0 : 1.0);
    });
  };
  CHECK(select_targets(pair, Subtask::kImperceptibility, fixed(0.35)).empty());
  CHECK(select_targets(pair, Subtask::kImperceptibility, fixed(0.3499)).size() == 1);
  SelectStats st;
  TargetScore none = [](const AnalyzedPair&, std::size_t) -> std::optional<double> { return std::nullopt; };
  CHECK(select_targets(pair, Subtask::kImperceptibility, none, &st).empty());
  CHECK(st.unscored == st.candidates);
  CHECK(st.candidates > 0);
}

TEST_CASE("nonspecificity uses nouns and verbs and a strict depth bound") {
  const Lexicon lex = abenomics_lexicon();
  DocumentPair p{"n", "The policy helped.", "A big objective.", std::nullopt, std::nullopt};
  const auto pair = analyze(p, lex, LexiconTagger(lex));
  const auto d = select_targets(pair, Subtask::kNonspecificity, nonspecificity_score(lex));
  // "objective" has depth 1; "big" is not in the lexicon and tags as a noun
  // but has no sense, so it is unscored.
  REQUIRE(d.size() == 1);
  CHECK(d[0].target_word == "objective");
  CHECK(d[0].score == 1);
  TargetScore six = [](const AnalyzedPair&, std::size_t) -> std::optional<double> { return 6; };
  CHECK(select_targets(pair, Subtask::kNonspecificity, six).empty());
}

TEST_CASE("lemma filter is POS-insensitive") {
  const Lexicon lex = abenomics_lexicon();
  DocumentPair p{"l", "The economy grew.", "Economies shrink.", std::nullopt, std::nullopt};
  const auto pair = analyze(p, lex, LexiconTagger(lex));
  const auto draft = make_draft(pair, 0, Subtask::kImperceptibility, 0.1);
  CHECK(draft.target_lemma == "economy");
  CHECK_FALSE(filter_lemma(draft, pair.passage));
  std::vector<Token> other = pair.passage;
  other[1].pos = Pos::kVerb;
  CHECK_FALSE(filter_lemma(draft, other));
  other[1].lemma = "economist";
  CHECK(filter_lemma(draft, other));
}

TEST_CASE("synonym/antonym filter") {
  const Lexicon toy = load_lexicon(oracle::data_dir() / "toy_lexicon.txt");
  DocumentPair p{"s", "A large whale.", "A big fish.", std::nullopt, std::nullopt};
  const auto pair = analyze(p, toy, LexiconTagger(toy));
  const auto draft = make_draft(pair, 1, Subtask::kImperceptibility, 0.1);
  CHECK(draft.target_word == "big");
  CHECK_FALSE(filter_synonym_antonym(draft, pair.passage, toy));
  DocumentPair q{"s", "A small whale.", "A big fish.", std::nullopt, std::nullopt};
  CHECK_FALSE(filter_synonym_antonym(draft, analyze(q, toy, LexiconTagger(toy)).passage, toy));
  DocumentPair r{"s", "A grey whale.", "A big fish.", std::nullopt, std::nullopt};
  CHECK(filter_synonym_antonym(draft, analyze(r, toy, LexiconTagger(toy)).passage, toy));
  auto oov = draft;
  oov.target_word = "zzzqx";
  CHECK(filter_synonym_antonym(oov, pair.passage, toy));
}

TEST_CASE("similarity filter: strict bound, literal match, OOV") {
  const Lexicon lex = abenomics_lexicon();
  DocumentPair p{"s", "gamma delta", "alpha beta", std::nullopt, std::nullopt};
  const auto pair = analyze(p, lex, LexiconTagger(lex));
  auto draft = make_draft(pair, 0, Subtask::kImperceptibility, 0.1);
  EmbeddingTable t(5);
  t.add("alpha", vec({1, 0, 0, 0, 0}));
  // |(17, 1, 5, 6, 7)| = 20, so the cosine is exactly 17/20.
  t.add("gamma", vec({17, 1, 5, 6, 7}));
  CHECK(max_similarity_to_passage("alpha", std::vector<std::string>{"gamma"}, t) == 0.85);
  CHECK(filter_similarity(draft, pair.passage, t));
  // cos((1,0), (0.91, 0.4146)) = 0.91 / sqrt(0.91^2 + 0.4146^2) = 0.9100...
  t.add("delta", vec({0.91, 0.41462, 0, 0, 0}));
  const double by_hand = 0.91 / std::sqrt(0.91 * 0.91 + 0.41462 * 0.41462);
  CHECK(by_hand == doctest::Approx(0.91).epsilon(1e-4));
  CHECK_FALSE(filter_similarity(draft, pair.passage, t));
  DocumentPair lit{"s", "alpha", "alpha beta", std::nullopt, std::nullopt};
  CHECK_FALSE(filter_similarity(draft, analyze(lit, lex, LexiconTagger(lex)).passage, t));
  auto oov = draft;
  oov.target_word = "beta";
  bool flag = false;
  CHECK(filter_similarity(oov, pair.passage, t, nullptr, &flag));
  CHECK(flag);
}

TEST_CASE("pool ranking: frequency, then best rank, then spelling") {
  std::vector<PoolEntry> pool;
  auto add = [&](const std::string& w, int n, int rank) {
    for (int i = 0; i < n; ++i) pool.push_back(PoolEntry{w, "m", rank, 0, {}, {}});
  };
  add("w1", 5, 9);
  add("w2", 4, 9);
  add("w3", 3, 9);
  add("w4", 2, 9);
  add("w5", 1, 1);
  auto r = rank_pool_types(pool);
  r.resize(4);
  CHECK(r == std::vector<std::string>{"w1", "w2", "w3", "w4"});
  add("w0", 2, 3);
  r = rank_pool_types(pool);
  CHECK(r[3] == "w0");
}

TEST_CASE("pool ranking agrees with the exhaustive selection oracle") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> word(0, 11), rank(1, 10), size(4, 30);
  for (int t = 0; t < 300; ++t) {
    std::vector<PoolEntry> pool;
    std::vector<oracle::PoolItem> items;
    for (int i = size(rng); i > 0; --i) {
      const std::string w = "t" + std::to_string(word(rng));
      const int r = rank(rng);
      pool.push_back(PoolEntry{w, "m", r, 0, {}, {}});
      items.push_back({w, r});
    }
    auto got = rank_pool_types(pool);
    if (got.size() > 4) got.resize(4);
    CHECK(got == oracle::pick_four(items));
  }
}

TEST_CASE("distractor exclusion: gold, lemma-aware synonyms, similar vectors") {
  const Lexicon toy = load_lexicon(oracle::data_dir() / "toy_lexicon.txt");
  EmbeddingTable t(2);
  t.add("big", vec({1, 0}));
  t.add("huge", vec({0.95, 0.1}));
  t.add("tiny", vec({0, 1}));
  CHECK(excluded_distractor("big", "big", toy, t));
  CHECK(excluded_distractor("large", "big", toy, t));
  CHECK(excluded_distractor("Large", "big", toy, t));
  CHECK(excluded_distractor("huge", "big", toy, t));
  CHECK_FALSE(excluded_distractor("tiny", "big", toy, t));
  // Antonyms are legitimate distractors.
  CHECK_FALSE(excluded_distractor("small", "big", toy, t));
  CHECK(excluded_distractor("develop", "grow", toy, t));
}

namespace {

QuestionDraft fake_draft(std::size_t i, const std::string& gold) {
  QuestionDraft d;
  d.pair_id = "p" + std::to_string(i);
  d.token_index = 1;
  d.target_word = gold;
  d.target_lemma = gold;
  d.passage_text = "passage " + std::to_string(i);
  d.question_text = "the @placeholder here";
  d.passage_words = {"passage", std::to_string(i)};
  d.question_words = {"the", "@placeholder", "here"};
  return d;
}

struct Spy {
  std::map<std::string, std::vector<std::set<std::string>>> trained;  // model -> item ids per call
};

NamedTrainer fake_trainer(const std::string& name, std::shared_ptr<Spy> spy) {
  return {name, [name, spy](std::span<const readers::ReaderItem> items, const std::vector<std::string>& vocab,
                            std::uint64_t seed) -> TopK {
            std::set<std::string> ids;
            for (const auto& it : items) ids.insert(it.id);
            spy->trained[name].push_back(ids);
            return [vocab, seed, name](const readers::ReaderItem& item, std::size_t k) {
              std::vector<std::pair<std::string, double>> out;
              for (const auto& w : vocab) {
                const double s = static_cast<double>(text::fnv1a64(name + w + item.id, seed) % 1000);
                out.emplace_back(w, s);
              }
              std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
              });
              if (out.size() > k) out.resize(k);
              return out;
            };
          }};
}

}  // namespace

TEST_CASE("k-fold distractors: provenance, option invariants, exclusions") {
  const Lexicon toy = load_lexicon(oracle::data_dir() / "toy_lexicon.txt");
  EmbeddingTable t(2);
  std::vector<QuestionDraft> drafts;
  const std::vector<std::string> golds = {"big", "large", "whale", "bank", "grow", "develop", "change", "economy",
                                          "animal", "entity", "small", "vertebrate", "institution", "w1", "w2", "w3"};
  for (std::size_t i = 0; i < 40; ++i) drafts.push_back(fake_draft(i, golds[i % golds.size()]));
  auto spy = std::make_shared<Spy>();
  const std::vector<NamedTrainer> models = {fake_trainer("ga", spy), fake_trainer("att", spy),
                                            fake_trainer("amwg", spy)};
  DistractorConfig cfg;
  cfg.seed = 5;
  const auto res = generate_distractors(drafts, models, toy, t, cfg);
  CHECK(spy->trained["ga"].size() == 4);

  std::size_t entries = 0;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& tr = res.traces[i];
    CHECK(tr.pool.size() == 30);
    for (const auto& e : tr.pool) {
      ++entries;
      CHECK(e.fold == tr.fold);
      CHECK(std::find(e.train_folds.begin(), e.train_folds.end(), tr.fold) == e.train_folds.end());
      CHECK(e.train_folds.size() == 3);
      CHECK(e.trained_on.count(i) == 0);
      // Independent of the recorded provenance: the spy saw what the model
      // was actually trained on.
      const auto& seen = spy->trained[e.model][static_cast<std::size_t>(e.fold)];
      CHECK(seen.count(drafts[i].pair_id + "#1") == 0);
      CHECK(seen.size() == e.trained_on.size());
    }
    if (!res.questions[i]) continue;
    const Question& q = *res.questions[i];
    CHECK(q.options.size() == 5);
    CHECK(std::set<std::string>(q.options.begin(), q.options.end()).size() == 5);
    CHECK(q.options[static_cast<std::size_t>(q.label)] == drafts[i].target_word);
    CHECK(std::count(q.options.begin(), q.options.end(), drafts[i].target_word) == 1);
    for (const auto& o : q.options) {
      if (o == drafts[i].target_word) continue;
      CHECK_FALSE(synonyms(drafts[i].target_word, toy).count(o));
    }
  }
  CHECK(entries == 40 * 30);
  std::size_t dropped = 0;
  for (const auto& q : res.questions) dropped += !q.has_value();
  CHECK(dropped == res.dropped);

  const auto again = generate_distractors(drafts, models, toy, t, cfg);
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    if (res.questions[i]) CHECK(again.questions[i]->options == res.questions[i]->options);
  }
}

TEST_CASE("fewer drafts than folds is rejected") {
  const Lexicon toy = load_lexicon(oracle::data_dir() / "toy_lexicon.txt");
  EmbeddingTable t(2);
  std::vector<QuestionDraft> drafts = {fake_draft(0, "big"), fake_draft(1, "small")};
  auto spy = std::make_shared<Spy>();
  const std::vector<NamedTrainer> models = {fake_trainer("ga", spy)};
  try {
    generate_distractors(drafts, models, toy, t, DistractorConfig{});
    FAIL("expected too_few_drafts");
  } catch (const ValidationError& e) {
    CHECK(e.reason() == "too_few_drafts");
  }
}

TEST_CASE("question file round trip and validation") {
  Question q{"p", "A passage.", "The @placeholder.", {"a", "b", "c", "d", "e"}, 3};
  std::stringstream ss;
  write_questions(ss, std::vector<Question>{q, q});
  const std::string line = ss.str().substr(0, ss.str().find('\n'));
  CHECK(line ==
        R"({"article":"A passage.","question":"The @placeholder.","option_0":"a","option_1":"b","option_2":"c","option_3":"d","option_4":"e","label":3})");
  const auto back = read_questions(ss, "mem");
  REQUIRE(back.size() == 2);
  CHECK(back[1].options == q.options);
  CHECK(back[1].label == 3);
  std::istringstream bad(
      R"({"article":"A","question":"The @placeholder.","option_0":"a","option_1":"b","option_2":"c","option_3":"d","option_4":"e","label":5})");
  CHECK_THROWS_AS(read_questions(bad, "mem"), ParseError);
  std::istringstream nohole(
      R"({"article":"A","question":"The blank.","option_0":"a","option_1":"b","option_2":"c","option_3":"d","option_4":"e","label":1})");
  CHECK_THROWS_AS(read_questions(nohole, "mem"), ParseError);
  const auto item = reader_item(back[0], "0");
  CHECK(item.gold == "d");
  CHECK(item.summary == std::vector<std::string>{"the", "@placeholder", "."});
}
