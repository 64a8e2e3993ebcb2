// recam: command-line entry point.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "recam/abstractness.hpp"
#include "recam/annotation.hpp"
#include "recam/annotation_server.hpp"
#include "recam/corpus.hpp"
#include "recam/error.hpp"
#include "recam/eval.hpp"
#include "recam/manifest.hpp"
#include "recam/qgen.hpp"
#include "recam/readers/train.hpp"
#include "recam/text.hpp"

namespace fs = std::filesystem;
using namespace recam;

namespace {

constexpr const char* kRootEnv = "RECAM_HOME";

// Relative paths that do not exist are retried under $RECAM_HOME.
fs::path resolve(const std::string& p) {
  fs::path path(p);
  if (path.empty() || path.is_absolute() || fs::exists(path)) return path;
  if (const char* root = std::getenv(kRootEnv)) {
    fs::path alt = fs::path(root) / path;
    if (fs::exists(alt)) return alt;
  }
  return path;
}

fs::path require(const std::string& p, const std::string& what) {
  fs::path path = resolve(p);
  if (!fs::exists(path)) {
    throw ResourceError(what + " not found: " + p + " (relative paths are also tried under $" + kRootEnv + ")");
  }
  return path;
}

struct ReaderFlags {
  int hidden = 150;
  int hops = 3;
  int batch = 32;
  double lr = 1e-3;
  double dropout = 0.3;
  int epochs = 10;

  void add(CLI::App* app) {
    app->add_option("--hidden", hidden, "GRU hidden size per direction")->capture_default_str();
    app->add_option("--hops", hops, "GA layers")->capture_default_str();
    app->add_option("--batch", batch, "minibatch size")->capture_default_str();
    app->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    app->add_option("--dropout", dropout, "dropout rate")->capture_default_str();
    app->add_option("--epochs", epochs, "training epochs")->capture_default_str();
  }
  readers::ModelShape shape() const { return {hidden, hops}; }
  readers::TrainingConfig config(std::uint64_t seed) const {
    return {epochs, static_cast<std::size_t>(batch), lr, dropout, seed};
  }
  nlohmann::ordered_json json() const {
    return {{"hidden", hidden}, {"hops", hops}, {"batch", batch}, {"lr", lr}, {"dropout", dropout}, {"epochs", epochs}};
  }
};

readers::GlossFn gloss_fn(std::shared_ptr<const Lexicon> lex) {
  if (!lex) return nullptr;
  return [lex](std::string_view w) { return gloss_for_candidate(w, *lex); };
}

std::vector<readers::ReaderItem> items_of(const std::vector<Question>& qs) {
  std::vector<readers::ReaderItem> out;
  for (std::size_t i = 0; i < qs.size(); ++i) out.push_back(reader_item(qs[i], std::to_string(i)));
  return out;
}

void print_report(const EvalReport& r, bool json) { std::cout << (json ? report_json(r) + "\n" : report_table(r)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abstract-word cloze question toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI config file; flags override it");
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for every randomized step")->capture_default_str();

  // train-scorer
  std::string ratings_path, emb_path, scorer_out, manifest_path;
  ScorerHyper hyper;
  auto* ts = app.add_subcommand("train-scorer", "train the imperceptibility regression scorer");
  ts->add_option("--ratings", ratings_path, "word<TAB>rating file")->required();
  ts->add_option("--embeddings", emb_path, "word vectors")->required();
  ts->add_option("--out", scorer_out, "scorer checkpoint")->required();
  ts->add_option("--h1", hyper.hidden1)->capture_default_str();
  ts->add_option("--h2", hyper.hidden2)->capture_default_str();
  ts->add_option("--lr", hyper.lr)->capture_default_str();
  ts->add_option("--epochs", hyper.epochs)->capture_default_str();
  ts->add_option("--batch", hyper.batch)->capture_default_str();
  ts->add_option("--manifest", manifest_path, "run manifest output");

  // score
  std::vector<std::string> score_words;
  std::string scorer_path, lexicon_path, context_text;
  auto* sc = app.add_subcommand("score", "both abstractness values for words");
  sc->add_option("words", score_words, "words to score")->required();
  sc->add_option("--scorer", scorer_path, "scorer checkpoint")->required();
  sc->add_option("--embeddings", emb_path)->required();
  sc->add_option("--lexicon", lexicon_path, "WNdb directory or toy lexicon file")->required();
  sc->add_option("--context", context_text, "disambiguation context text");

  // generate
  std::string subtask_str = "imperceptibility", corpus_path, questions_out, contextual_path, trace_path;
  std::string sim_sources = "both";
  int folds = 4;
  std::size_t top_k = 10;
  ReaderFlags gen_flags;
  gen_flags.epochs = 3;
  auto* gen = app.add_subcommand("generate", "generate multiple-choice questions");
  gen->add_option("--subtask", subtask_str)->check(CLI::IsMember({"imperceptibility", "nonspecificity"}))->capture_default_str();
  gen->add_option("--corpus", corpus_path, "JSONL passage/summary pairs")->required();
  gen->add_option("--lexicon", lexicon_path)->required();
  gen->add_option("--embeddings", emb_path)->required();
  gen->add_option("--scorer", scorer_path, "scorer checkpoint (imperceptibility)");
  gen->add_option("--contextual", contextual_path, "precomputed contextual vectors (JSONL)");
  gen->add_option("--sim-sources", sim_sources, "similarity sources")->check(CLI::IsMember({"both", "static"}))->capture_default_str();
  gen->add_option("--out", questions_out, "question JSONL output")->required();
  gen->add_option("--manifest", manifest_path, "run manifest output");
  gen->add_option("--trace", trace_path, "distractor provenance JSONL output");
  gen->add_option("--folds", folds)->capture_default_str();
  gen->add_option("--top-k", top_k)->capture_default_str();
  gen_flags.add(gen);

  // train-reader
  std::string variant_str = "ga", train_path, dev_path, model_out, curve_path;
  ReaderFlags tr_flags;
  auto* tr = app.add_subcommand("train-reader", "train a GA / ATT / AMWG reader on questions");
  tr->add_option("--variant", variant_str)->check(CLI::IsMember({"ga", "att", "amwg"}))->capture_default_str();
  tr->add_option("--train", train_path, "question JSONL")->required();
  tr->add_option("--dev", dev_path, "question JSONL for the dev curve");
  tr->add_option("--embeddings", emb_path)->required();
  tr->add_option("--lexicon", lexicon_path, "gloss source (AMWG)");
  tr->add_option("--out", model_out, "checkpoint output")->required();
  tr->add_option("--curve", curve_path, "loss curve CSV");
  tr->add_option("--manifest", manifest_path, "run manifest output");
  tr_flags.add(tr);

  // predict
  std::string model_path, pred_out;
  auto* pr = app.add_subcommand("predict", "predict answers for questions");
  pr->add_option("--model", model_path)->required();
  pr->add_option("--questions", train_path, "question JSONL")->required();
  pr->add_option("--embeddings", emb_path)->required();
  pr->add_option("--lexicon", lexicon_path, "gloss source (AMWG)");
  pr->add_option("--out", pred_out, "prediction JSONL")->required();

  // evaluate
  std::string preds_path;
  bool json_out = false;
  auto* ev = app.add_subcommand("evaluate", "score a prediction file");
  ev->add_option("--questions", train_path)->required();
  ev->add_option("--predictions", preds_path)->required();
  ev->add_flag("--json", json_out, "JSON report");

  // cross-eval
  std::string test_path, same_path, train_source, test_source;
  auto* ce = app.add_subcommand("cross-eval", "evaluate a model on another subtask's test set");
  ce->add_option("--model", model_path)->required();
  ce->add_option("--test", test_path, "question JSONL of the other subtask")->required();
  ce->add_option("--same-task", same_path, "the model's own test set, for the delta");
  ce->add_option("--train-source", train_source, "name of the training subtask")->required();
  ce->add_option("--test-source", test_source, "name of the test subtask")->required();
  ce->add_option("--embeddings", emb_path)->required();
  ce->add_option("--lexicon", lexicon_path, "gloss source (AMWG)");
  ce->add_flag("--json", json_out, "JSON report");

  // serve
  std::string log_path, host = "127.0.0.1";
  int port = 8080;
  auto* sv = app.add_subcommand("serve", "annotation HTTP API");
  sv->add_option("--questions", train_path)->required();
  sv->add_option("--log", log_path, "annotation record log (JSONL)")->required();
  sv->add_option("--host", host)->capture_default_str();
  sv->add_option("--port", port)->capture_default_str();

  // select
  std::string selection_out;
  auto* se = app.add_subcommand("select", "apply annotation selection rules");
  se->add_option("--questions", train_path)->required();
  se->add_option("--annotations", log_path, "annotation record log (JSONL)")->required();
  se->add_option("--out", selection_out, "selection JSON (stdout if omitted)");
  se->add_option("--kept-questions", questions_out, "write kept questions as JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunManifest manifest;
    manifest.seed = seed;

    if (*ts) {
      manifest.command = "train-scorer";
      const auto ratings = load_ratings(require(ratings_path, "ratings"));
      const auto table = load_embeddings(require(emb_path, "embeddings"));
      hyper.seed = seed;
      const auto split = split_ratings(ratings, seed);
      auto result = train_scorer(split.train, table, hyper);
      result.scorer.save(scorer_out);
      const double r = split.test.size() >= 2 ? heldout_pearson(split.test, result.scorer, table) : 0.0;
      std::cout << "train_mse " << result.train_mse << "\nheldout_pearson " << r << "\ntrain " << split.train.size()
                << " test " << split.test.size() << " dropped_oov " << result.dropped_oov << '\n';
      if (!manifest_path.empty()) {
        manifest.add_input("ratings", resolve(ratings_path));
        manifest.add_input("embeddings", resolve(emb_path));
        manifest.config = {{"h1", hyper.hidden1}, {"h2", hyper.hidden2}, {"lr", hyper.lr},
                           {"epochs", hyper.epochs}, {"batch", hyper.batch}};
        manifest.counts = {{"train", split.train.size()}, {"test", split.test.size()},
                           {"dropped_oov", result.dropped_oov}};
        manifest.write(manifest_path);
      }
      return 0;
    }

    if (*sc) {
      const auto table = load_embeddings(require(emb_path, "embeddings"));
      const auto scorer = RegressionScorer::load(require(scorer_path, "scorer"));
      const auto lex = load_lexicon(require(lexicon_path, "lexicon"));
      std::vector<std::string> context;
      for (auto& w : text::words(context_text)) {
        const auto lemmas = lemmatize_any(w, lex);
        context.push_back(lemmas.empty() ? w : lemmas.front().first);
      }
      std::cout << "word\timperceptibility\tnonspecificity\n";
      for (const auto& w : score_words) {
        std::cout << w << '\t';
        if (table.contains(text::to_lower(w))) {
          std::cout << imperceptibility(text::to_lower(w), scorer, table);
        } else {
          std::cout << "oov";
        }
        std::cout << '\t';
        std::string spec = "none";
        for (Pos pos : {Pos::kNoun, Pos::kVerb}) {
          try {
            const int d = nonspecificity(text::to_lower(w), pos, context, {}, lex);
            spec = std::string(pos_name(pos)) + ":" + std::to_string(d);
            break;
          } catch (const LookupError&) {
          }
        }
        std::cout << spec << '\n';
      }
      return 0;
    }

    if (*gen) {
      manifest.command = "generate";
      const Subtask subtask = parse_subtask(subtask_str);
      auto lex = std::make_shared<const Lexicon>(load_lexicon(require(lexicon_path, "lexicon")));
      auto table = std::make_shared<const EmbeddingTable>(load_embeddings(require(emb_path, "embeddings")));
      std::optional<RegressionScorer> scorer;
      TargetScore score;
      if (subtask == Subtask::kImperceptibility) {
        if (scorer_path.empty()) throw UsageError("--scorer is required for the imperceptibility subtask");
        scorer = RegressionScorer::load(require(scorer_path, "scorer"));
        score = imperceptibility_score(*scorer, *table);
      } else {
        score = nonspecificity_score(*lex);
      }
      std::optional<ContextualVectors> ctx;
      if (!contextual_path.empty()) ctx = load_contextual(require(contextual_path, "contextual vectors"));

      const auto pairs = ingest(require(corpus_path, "corpus"));
      LexiconTagger tagger(*lex);
      std::vector<AnalyzedPair> analyzed;
      for (const auto& p : pairs) analyzed.push_back(analyze(p, *lex, tagger));

      GenerationConfig cfg;
      cfg.subtask = subtask;
      cfg.distractors = {folds, top_k, seed};
      cfg.use_contextual = sim_sources == "both";
      const auto trainers = default_trainers(gen_flags.shape(), gen_flags.config(seed), table, gloss_fn(lex));
      auto result = generate_questions(analyzed, score, *lex, *table, ctx ? &*ctx : nullptr, trainers, cfg);
      write_questions(fs::path(questions_out), result.questions);

      if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw ResourceError("cannot write trace: " + trace_path);
        for (const auto& t : result.traces) {
          nlohmann::ordered_json j;
          const auto& d = result.drafts[t.draft];
          j["pair_id"] = d.pair_id;
          j["target"] = d.target_word;
          j["fold"] = t.fold;
          j["pool"] = nlohmann::ordered_json::array();
          for (const auto& e : t.pool) {
            j["pool"].push_back({{"word", e.word}, {"model", e.model}, {"rank", e.rank}, {"fold", e.fold},
                                 {"train_folds", e.train_folds}});
          }
          j["excluded"] = t.excluded;
          j["distractors"] = t.distractors;
          out << j.dump() << '\n';
        }
      }

      const StageCounts& c = result.counts;
      std::cout << "pairs " << c.pairs << " drafts " << c.drafts << " emitted " << c.emitted << '\n';
      if (!manifest_path.empty()) {
        manifest.add_input("corpus", resolve(corpus_path));
        manifest.add_input("lexicon", resolve(lexicon_path));
        manifest.add_input("embeddings", resolve(emb_path));
        if (scorer) manifest.add_input("scorer", resolve(scorer_path));
        if (ctx) manifest.add_input("contextual", resolve(contextual_path));
        manifest.config = {{"subtask", subtask_name(subtask)}, {"folds", folds}, {"top_k", top_k},
                           {"sim_sources", sim_sources}, {"reader", gen_flags.json()}};
        manifest.counts = {{"pairs", c.pairs},
                           {"drafts", c.drafts},
                           {"rejected_lemma", c.rejected_lemma},
                           {"rejected_synonym_antonym", c.rejected_synonym_antonym},
                           {"rejected_similarity", c.rejected_similarity},
                           {"dropped_distractors", c.dropped_distractors},
                           {"emitted", c.emitted},
                           {"unscored_tokens", c.unscored_tokens},
                           {"similarity_oov", c.similarity_oov}};
        manifest.warnings = result.warnings;
        manifest.write(manifest_path);
      }
      return 0;
    }

    if (*tr) {
      manifest.command = "train-reader";
      const auto variant = readers::parse_variant(variant_str);
      auto table = std::make_shared<const EmbeddingTable>(load_embeddings(require(emb_path, "embeddings")));
      std::shared_ptr<const Lexicon> lex;
      if (!lexicon_path.empty()) lex = std::make_shared<const Lexicon>(load_lexicon(require(lexicon_path, "lexicon")));
      if (variant == readers::Variant::kAmwg && !lex) throw UsageError("--lexicon is required for amwg glosses");
      const auto train_qs = read_questions(require(train_path, "training questions"));
      const auto items = items_of(train_qs);
      std::set<std::string> vocab_set;
      for (const auto& it : items) vocab_set.insert(it.options.begin(), it.options.end());
      readers::ReaderModel model(variant, tr_flags.shape(), {vocab_set.begin(), vocab_set.end()}, table,
                                 variant == readers::Variant::kAmwg ? gloss_fn(lex) : nullptr, seed);
      std::vector<readers::ReaderItem> dev;
      if (!dev_path.empty()) dev = items_of(read_questions(require(dev_path, "dev questions")));
      const auto curve = readers::train(model, items, tr_flags.config(seed), dev, [](const readers::CurvePoint& p) {
        std::cout << "epoch " << p.epoch << ' ' << p.split << " loss " << p.loss << " acc " << p.accuracy << '\n';
        return true;
      });
      model.save(model_out);
      if (!curve_path.empty()) readers::write_curve_csv(curve_path, curve);
      if (!manifest_path.empty()) {
        manifest.add_input("train", resolve(train_path));
        manifest.add_input("embeddings", resolve(emb_path));
        manifest.config = tr_flags.json();
        manifest.config["variant"] = variant_str;
        manifest.counts = {{"train_items", items.size()}, {"dev_items", dev.size()}, {"vocab", vocab_set.size()}};
        manifest.write(manifest_path);
      }
      return 0;
    }

    auto load_model = [&]() {
      auto table = std::make_shared<const EmbeddingTable>(load_embeddings(require(emb_path, "embeddings")));
      std::shared_ptr<const Lexicon> lex;
      if (!lexicon_path.empty()) lex = std::make_shared<const Lexicon>(load_lexicon(require(lexicon_path, "lexicon")));
      return readers::ReaderModel::load(require(model_path, "model"), table, gloss_fn(lex));
    };

    if (*pr) {
      const auto model = load_model();
      const auto qs = read_questions(require(train_path, "questions"));
      write_predictions(pred_out, predict_questions(model, qs));
      return 0;
    }

    if (*ev) {
      const auto qs = read_questions(require(train_path, "questions"));
      const auto preds = read_predictions(require(preds_path, "predictions"));
      print_report(evaluate_predictions(preds, qs), json_out);
      return 0;
    }

    if (*ce) {
      const auto model = load_model();
      const auto test = read_questions(require(test_path, "test questions"));
      std::optional<double> same;
      if (!same_path.empty()) same = evaluate_model(model, read_questions(require(same_path, "same-task questions"))).accuracy;
      print_report(cross_eval(model, test, train_source, test_source, same), json_out);
      return 0;
    }

    if (*sv) {
      AnnotationStore store(read_questions(require(train_path, "questions")), fs::path(log_path));
      AnnotationServer server(store);
      const int bound = server.bind(host, port);
      std::cout << "listening on http://" << host << ':' << bound << std::endl;
      return server.listen() ? 0 : 3;
    }

    if (*se) {
      const auto qs = read_questions(require(train_path, "questions"));
      AnnotationStore store(qs, require(log_path, "annotation log"));
      const auto sel = store.selection();
      const std::string out = to_json(sel).dump(2) + "\n";
      if (selection_out.empty()) {
        std::cout << out;
      } else {
        std::ofstream f(selection_out, std::ios::binary);
        if (!f) throw ResourceError("cannot write " + selection_out);
        f << out;
      }
      if (!questions_out.empty()) {
        std::vector<Question> kept;
        for (std::size_t i = 0; i < qs.size(); ++i) {
          if (sel.kept.count(std::to_string(i))) kept.push_back(qs[i]);
        }
        write_questions(fs::path(questions_out), kept);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
