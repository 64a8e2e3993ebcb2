#include <fstream>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "recam/annotation.hpp"
#include "recam/annotation_server.hpp"
#include "recam/error.hpp"
// After Eigen: httplib pulls in system headers whose macros clash with it.
#include "httplib.h"

using namespace recam;

namespace {

std::vector<Question> qs(std::size_t n) {
  std::vector<Question> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"p" + std::to_string(i), "Passage number " + std::to_string(i) + ".", "The @placeholder here.",
                   {"a", "b", "c", "d", "e"}, static_cast<int>(i % 5)});
  }
  return out;
}

AnnotationRecord rec(std::size_t q, const std::string& who, int option, Difficulty d = Difficulty::kMedium,
                     bool spans = true) {
  AnnotationRecord r;
  r.question_id = std::to_string(q);
  r.annotator_id = who;
  r.chosen_option = option;
  r.difficulty = d;
  if (spans) {
    r.passage_span = Span{0, 7};
    r.question_span = Span{4, 16};
  } else {
    r.passage_span = Span{3, 3};
    r.question_span = Span{4, 16};
  }
  r.timestamp = "2020-01-01T00:00:00Z";
  return r;
}

// Keep rule restated: a question survives when some record of it is correct,
// has two nonempty spans, and comes from an annotator whose overall accuracy
// is above 0.4. (A correct record is never an easy-but-wrong record.)
std::set<std::string> kept_by_rule(const std::vector<AnnotationRecord>& rs, const std::vector<Question>& q) {
  std::map<std::string, std::pair<int, int>> acc;
  for (const auto& r : rs) {
    auto& a = acc[r.annotator_id];
    a.second += 1;
    a.first += r.chosen_option == q[std::stoul(r.question_id)].label;
  }
  std::set<std::string> kept;
  for (const auto& r : rs) {
    const auto [c, n] = acc[r.annotator_id];
    const bool good_annotator = 5 * c > 2 * n;  // c / n > 0.4 without rounding
    const bool spans = r.passage_span && r.passage_span->second > r.passage_span->first && r.question_span &&
                       r.question_span->second > r.question_span->first;
    if (good_annotator && spans && r.chosen_option == q[std::stoul(r.question_id)].label) kept.insert(r.question_id);
  }
  return kept;
}

}  // namespace

TEST_CASE("annotator accuracy of exactly 0.4 is dropped") {
  const auto q = qs(5);
  std::vector<AnnotationRecord> rs;
  // Two correct, three wrong => 0.4.
  for (std::size_t i = 0; i < 5; ++i) rs.push_back(rec(i, "ann", i < 2 ? q[i].label : (q[i].label + 1) % 5));
  const auto s = select(rs, q);
  CHECK(s.annotator_stats.at("ann").accuracy == doctest::Approx(0.4));
  CHECK(s.kept.empty());
  CHECK(s.dropped_low_accuracy == 5);
  // One more correct record lifts the annotator above the floor.
  rs.push_back(rec(2, "ann", q[2].label));
  rs.erase(rs.begin() + 2);
  const auto t = select(rs, q);
  CHECK(t.kept == std::set<std::string>{"0", "1", "2"});
}

TEST_CASE("empty spans and easy-but-wrong records are dropped") {
  const auto q = qs(3);
  std::vector<AnnotationRecord> rs = {
      rec(0, "a", q[0].label, Difficulty::kHard, false),
      rec(1, "a", q[1].label),
      rec(2, "a", (q[2].label + 1) % 5, Difficulty::kEasy),
  };
  const auto s = select(rs, q);
  CHECK(s.dropped_empty_span == 1);
  CHECK(s.dropped_easy_wrong == 1);
  CHECK(s.kept == std::set<std::string>{"1"});
  CHECK(s.rejected.at("0") == "no_valid_correct_record");
  CHECK(s.rejected.at("2") == "no_valid_correct_record");
  rs.pop_back();
  CHECK(select(rs, q).rejected.at("2") == "no_annotations");
  rs.push_back(rec(7, "a", 0));
  CHECK_THROWS_AS(select(rs, q), ValidationError);
}

TEST_CASE("selection matches the keep rule and ignores record order") {
  std::mt19937_64 rng(99);
  const auto q = qs(12);
  std::uniform_int_distribution<int> opt(0, 4), who(0, 5), qi(0, 11), coin(0, 9);
  for (int t = 0; t < 60; ++t) {
    std::vector<AnnotationRecord> rs;
    for (int i = 0; i < 30; ++i) {
      const auto qq = static_cast<std::size_t>(qi(rng));
      const int c = coin(rng);
      const int option = c < 5 ? q[qq].label : opt(rng);
      rs.push_back(rec(qq, "a" + std::to_string(who(rng)), option,
                       static_cast<Difficulty>(opt(rng) % 3), coin(rng) != 0));
    }
    const auto base = select(rs, q);
    CHECK(base.kept == kept_by_rule(rs, q));
    const std::string dump = to_json(base).dump();
    for (int p = 0; p < 10; ++p) {
      std::shuffle(rs.begin(), rs.end(), rng);
      CHECK(to_json(select(rs, q)).dump() == dump);
    }
  }
}

TEST_CASE("record parsing reasons") {
  auto reason = [](const nlohmann::json& j) {
    try {
      record_from_json(j);
    } catch (const ValidationError& e) {
      return e.reason();
    }
    return std::string("ok");
  };
  nlohmann::json good = {{"question_id", "0"}, {"annotator_id", "x"}, {"chosen_option", 1},
                         {"passage_span", {0, 3}}, {"question_span", {0, 3}}, {"difficulty", "Hard"}};
  CHECK(reason(good) == "ok");
  auto j = good;
  j.erase("annotator_id");
  CHECK(reason(j) == "missing_field");
  j = good;
  j["difficulty"] = "trivial";
  CHECK(reason(j) == "invalid_difficulty");
  j = good;
  j["chosen_option"] = "one";
  CHECK(reason(j) == "option_out_of_range");
  const auto back = record_from_json(to_json(record_from_json(good)));
  CHECK(back.difficulty == Difficulty::kHard);
  CHECK(back.passage_span == Span{0, 3});
}

TEST_CASE("store validates, replaces resubmissions and replays its log") {
  const auto dir = std::filesystem::temp_directory_path() / "recam_store";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto log = dir / "log.jsonl";
  {
    AnnotationStore store(qs(3), log);
    CHECK(store.next_for("a") == "0");
    auto r = rec(0, "a", 1);
    r.timestamp.clear();
    CHECK_FALSE(store.submit(r).timestamp.empty());
    CHECK(store.next_for("a") == "1");
    store.submit(rec(0, "a", 0));
    CHECK(store.records().size() == 1);
    CHECK(store.records()[0].chosen_option == 0);
    CHECK(store.log_lines() == 2);

    auto bad = rec(1, "a", 5);
    CHECK_THROWS_AS(store.submit(bad), ValidationError);
    bad = rec(1, "a", 1, Difficulty::kEasy, false);
    try {
      store.submit(bad);
    } catch (const ValidationError& e) {
      CHECK(e.reason() == "empty_passage_span");
    }
    bad = rec(1, "a", 1);
    bad.question_span = Span{0, 999};
    try {
      store.submit(bad);
    } catch (const ValidationError& e) {
      CHECK(e.reason() == "span_out_of_range");
    }
    CHECK_THROWS_AS(store.submit(rec(9, "a", 1)), NotFoundError);
    store.submit(rec(1, "b", 1));
  }
  {
    AnnotationStore store(qs(3), log);
    CHECK(store.records().size() == 2);
    CHECK(store.log_lines() == 3);
    store.compact();
    CHECK(store.log_lines() == 2);
    store.submit(rec(2, "b", 2));
  }
  AnnotationStore again(qs(3), log);
  CHECK(again.records().size() == 3);
  std::ifstream in(log);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 3);
}

TEST_CASE("concurrent submissions are all recorded") {
  AnnotationStore store(qs(50));
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&store, t] {
      for (std::size_t i = 0; i < 50; ++i) {
        store.submit(rec(i, "t" + std::to_string(t), 0));
        store.next_for("t" + std::to_string(t));
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(store.records().size() == 200);
}

TEST_CASE("HTTP API") {
  const auto dir = std::filesystem::temp_directory_path() / "recam_http";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  AnnotationStore store(qs(2), dir / "log.jsonl");
  AnnotationServer server(store);
  const int port = server.bind("127.0.0.1", 0);
  std::thread th([&] { server.listen(); });
  while (!server.running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  httplib::Client cli("127.0.0.1", port);
  auto next = cli.Get("/api/questions/next?annotator=z");
  REQUIRE(next);
  CHECK(next->status == 200);
  const auto payload = nlohmann::json::parse(next->body);
  CHECK(payload["id"] == "0");
  CHECK(payload["options"].size() == 5);
  CHECK_FALSE(payload.contains("label"));

  CHECK(cli.Get("/api/questions/next")->status == 400);
  CHECK(cli.Get("/api/questions/1")->status == 200);
  CHECK(cli.Get("/api/questions/7")->status == 404);

  nlohmann::json body = {{"question_id", "0"}, {"annotator_id", "z"}, {"chosen_option", 0},
                         {"passage_span", {0, 7}}, {"question_span", {4, 16}}, {"difficulty", "medium"}};
  auto post = cli.Post("/api/annotations", body.dump(), "application/json");
  REQUIRE(post);
  CHECK(post->status == 201);
  CHECK(nlohmann::json::parse(post->body)["record"]["question_id"] == "0");

  body["question_span"] = {4, 4};
  post = cli.Post("/api/annotations", body.dump(), "application/json");
  CHECK(post->status == 400);
  CHECK(nlohmann::json::parse(post->body)["reason"] == "empty_question_span");
  CHECK(cli.Post("/api/annotations", "{nope", "application/json")->status == 400);
  body["question_id"] = "42";
  body["question_span"] = {4, 9};
  CHECK(cli.Post("/api/annotations", body.dump(), "application/json")->status == 404);

  body["question_id"] = "1";
  body["chosen_option"] = 1;
  CHECK(cli.Post("/api/annotations", body.dump(), "application/json")->status == 201);
  CHECK(cli.Get("/api/questions/next?annotator=z")->status == 204);

  const auto exported = cli.Get("/api/export");
  CHECK(std::count(exported->body.begin(), exported->body.end(), '\n') == 2);
  const auto sel = nlohmann::json::parse(cli.Get("/api/selection")->body);
  CHECK(sel["kept"] == nlohmann::json::array({"0", "1"}));

  server.stop();
  th.join();
}
