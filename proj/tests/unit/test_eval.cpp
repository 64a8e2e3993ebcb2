#include "doctest.h"
#include "oracles.hpp"
#include "recam/error.hpp"
#include "recam/eval.hpp"
#include "recam/qgen.hpp"

using namespace recam;

namespace {

struct Fixture {
  std::vector<RankedPrediction> preds;
  std::vector<std::vector<std::string>> rankings;
  std::vector<std::string> gold;
};

Fixture random_fixture(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_items(1, 20), len(1, 12), word(0, 14);
  Fixture f;
  for (int i = n_items(rng); i > 0; --i) {
    std::vector<std::string> pool;
    for (int w = 0; w < 15; ++w) pool.push_back("v" + std::to_string(w));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(len(rng)));
    const std::string g = "v" + std::to_string(word(rng));
    f.preds.push_back({std::to_string(i), pool, g});
    f.rankings.push_back(pool);
    f.gold.push_back(g);
  }
  return f;
}

}  // namespace

TEST_CASE("ranking metrics agree with the brute-force definitions") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 300; ++t) {
    const auto f = random_fixture(rng);
    CHECK(mrr(f.preds) == oracle::mrr(f.rankings, f.gold));
    for (std::size_t k : {1, 3, 5, 10, 20}) CHECK(recall_at_k(f.preds, k) == oracle::recall(f.rankings, f.gold, k));
  }
}

TEST_CASE("metric edge cases") {
  const std::vector<RankedPrediction> none;
  CHECK_THROWS_AS(mrr(none), ValidationError);
  const std::vector<RankedPrediction> one = {{"0", {"a", "b", "c"}, "c"}};
  CHECK(gold_rank(one[0]) == 3);
  CHECK(mrr(one) == doctest::Approx(1.0 / 3));
  CHECK(recall_at_k(one, 2) == 0);
  CHECK(recall_at_k(one, 3) == 1);
  CHECK_THROWS_AS(recall_at_k(one, 0), ValidationError);
  const std::vector<RankedPrediction> absent = {{"0", {"a"}, "z"}};
  CHECK(mrr(absent) == 0);
  const std::vector<int> a = {0, 1, 2, 3}, b = {0, 1, 0, 0}, c = {1};
  CHECK(accuracy(a, b) == 0.5);
  CHECK_THROWS_AS(accuracy(a, c), ValidationError);
}

TEST_CASE("cross-task formatting reproduces the leaderboard rows") {
  struct Row {
    double same, cross;
    const char* text;
  };
  const Row rows[] = {
      {95.1, 91.8, "91.8 (↓ 3.3)"}, {93.0, 91.7, "91.7 (↓ 1.3)"},  {90.5, 88.6, "88.6 (↓ 1.9)"},
      {90.0, 86.2, "86.2 (↓ 3.8)"}, {88.6, 74.2, "74.2 (↓ 14.4)"}, {87.5, 82.1, "82.1 (↓ 5.4)"},
      {86.7, 81.8, "81.8 (↓ 4.9)"}, {86.2, 78.6, "78.6 (↓ 7.6)"},  {82.1, 80.7, "80.7 (↓ 1.4)"},
      {81.8, 76.3, "76.3 (↓ 5.5)"}, {75.3, 61.8, "61.8 (↓ 13.5)"}, {56.6, 51.8, "51.8 (↓ 4.8)"},
      {46.3, 35.2, "35.2 (↓ 11.1)"}, {42.0, 39.4, "39.4 (↓ 2.6)"},
  };
  for (const auto& r : rows) {
    CAPTURE(r.text);
    CHECK(format_cross(r.cross / 100, r.cross / 100 - r.same / 100) == r.text);
  }
  CHECK(format_cross(0.5, 0.021) == "50.0 (↑ 2.1)");
}

namespace {

std::shared_ptr<EmbeddingTable> table() {
  auto t = std::make_shared<EmbeddingTable>(3);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (const char* w : {"a", "b", "c", "d", "e", "f", "the", "x", "y"}) {
    Eigen::VectorXd v(3);
    for (int i = 0; i < 3; ++i) v(i) = n(rng);
    t->add(w, v);
  }
  return t;
}

std::vector<Question> questions() {
  return {
      {"0", "x y a", "the @placeholder", {"a", "b", "c", "d", "e"}, 0},
      {"1", "y b x", "@placeholder the", {"b", "c", "d", "e", "f"}, 2},
      {"2", "c c c", "the @placeholder x", {"f", "e", "d", "c", "b"}, 3},
  };
}

}  // namespace

TEST_CASE("cross evaluation on the same task equals direct evaluation") {
  const auto t = table();
  readers::ReaderModel m(readers::Variant::kAtt, readers::ModelShape{4, 1}, {"a", "b", "c", "d", "e", "f"}, t,
                         nullptr, 3);
  const auto qs = questions();
  const auto direct = evaluate_model(m, qs, "s1", "s1");
  const auto cross = cross_eval(m, qs, "s1", "s1", direct.accuracy);
  CHECK(cross.accuracy == direct.accuracy);
  CHECK(cross.mrr == direct.mrr);
  CHECK(cross.recall_1 == direct.recall_1);
  CHECK(*cross.delta == 0.0);
  CHECK(cross.recall_1 == cross.accuracy);
  CHECK(cross.recall_5 == 1.0);
  CHECK(report_json(cross).find("\"cross\"") != std::string::npos);
  CHECK(report_table(direct).find("accuracy") == 0);
}

TEST_CASE("prediction files: validation and scoring") {
  const auto qs = questions();
  std::vector<PredictionRecord> preds = {
      {"0", 0, std::nullopt},
      {"1", std::nullopt, std::vector<std::string>{"D", "c", "b", "e", "f"}},
      {"2", 1, std::nullopt},
  };
  const auto r = evaluate_predictions(preds, qs);
  CHECK(r.accuracy == doctest::Approx(2.0 / 3));
  CHECK(r.n_items == 3);
  // Only item 1 carries a ranking; gold "d" is first.
  CHECK(r.mrr == 1.0);

  const auto dir = std::filesystem::temp_directory_path() / "recam_eval";
  std::filesystem::create_directories(dir);
  write_predictions(dir / "p.jsonl", preds);
  const auto back = read_predictions(dir / "p.jsonl");
  REQUIRE(back.size() == 3);
  CHECK(*back[1].ranking == *preds[1].ranking);

  auto missing = preds;
  missing.pop_back();
  CHECK_THROWS_AS(evaluate_predictions(missing, qs), ValidationError);
  auto extra = preds;
  extra.push_back({"9", 0, std::nullopt});
  CHECK_THROWS_AS(evaluate_predictions(extra, qs), ValidationError);
}
