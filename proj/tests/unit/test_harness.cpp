#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "ocrcheck/harness.hpp"

using namespace ocrcheck;
using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ocrcheck_" + tag + "_" +
                                        std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

core::TestCase presence_test(std::string id, std::string doc, std::string category,
                             std::string anchor) {
  core::TestCase t;
  t.id = std::move(id);
  t.doc_id = std::move(doc);
  t.page = 1;
  t.category = std::move(category);
  t.payload = checks::PresencePayload{std::move(anchor)};
  return t;
}

// Synthetic 40-document store with a planted pass pattern: doc i carries 5
// tests, of which plant(i) pass against its candidate file.
constexpr int kDocs = 40;
constexpr int kTestsPerDoc = 5;
int plant(int doc) { return (doc * 7 + 3) % (kTestsPerDoc + 1); }
std::string category_of(int doc) { return "cat" + std::to_string(doc % 4); }
std::string doc_name(int doc) {
  return "doc" + std::string(doc < 10 ? "0" : "") + std::to_string(doc);
}

core::TestStore planted_store() {
  core::TestStore store;
  for (int d = 0; d < kDocs; ++d) {
    for (int t = 0; t < kTestsPerDoc; ++t) {
      store[doc_name(d)].push_back(
          presence_test(doc_name(d) + "/t" + std::to_string(t), doc_name(d),
                        category_of(d),
                        "tok-" + std::to_string(d) + "-" + std::to_string(t)));
    }
  }
  return store;
}

void write_planted_candidates(const fs::path& dir) {
  for (int d = 0; d < kDocs; ++d) {
    std::string body;
    for (int t = 0; t < plant(d); ++t) {
      body += "tok-" + std::to_string(d) + "-" + std::to_string(t) + " ";
    }
    body += "filler text";
    write_file(dir / (doc_name(d) + ".md"), body);
  }
}

double planted_overall_percent() {
  // straight re-derivation from the pattern, no library calls
  double sum = 0.0;
  for (int c = 0; c < 4; ++c) {
    int passed = 0, total = 0;
    for (int d = c; d < kDocs; d += 4) {
      passed += plant(d);
      total += kTestsPerDoc;
    }
    sum += static_cast<double>(passed) / total;
  }
  return sum / 4.0 * 100.0;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("score_run: planted pattern matches hand computation exactly") {
  TempDir dir("bench");
  write_planted_candidates(dir.path);
  auto report = harness::score_run(planted_store(), dir.path, 400, 7);

  for (int c = 0; c < 4; ++c) {
    int passed = 0, total = 0;
    for (int d = c; d < kDocs; d += 4) {
      passed += plant(d);
      total += kTestsPerDoc;
    }
    auto it = report.per_category.find("cat" + std::to_string(c));
    REQUIRE(it != report.per_category.end());
    CHECK(it->second.test_count == static_cast<std::size_t>(total));
    CHECK(it->second.pass_rate == doctest::Approx(static_cast<double>(passed) / total));
  }
  CHECK(report.overall == doctest::Approx(planted_overall_percent()));
  CHECK(report.ci_halfwidth > 0.0);
}

TEST_CASE("score_run: overall is the mean of category means") {
  TempDir dir("mean");
  core::TestStore store;
  store["a"].push_back(presence_test("a/t0", "a", "good", "present-token"));
  store["b"].push_back(presence_test("b/t0", "b", "bad", "absent-token"));
  store["b"].push_back(presence_test("b/t1", "b", "bad", "another-missing"));
  write_file(dir.path / "a.md", "present-token here");
  write_file(dir.path / "b.md", "nothing useful");
  auto report = harness::score_run(store, dir.path, 0, 0);
  CHECK(report.overall == doctest::Approx(50.0));
}

TEST_CASE("score_run: all-pass store scores 100 with zero CI halfwidth") {
  TempDir dir("allpass");
  core::TestStore store;
  for (int d = 0; d < 6; ++d) {
    store[doc_name(d)].push_back(presence_test(doc_name(d) + "/t", doc_name(d),
                                               category_of(d), "anchor-present"));
    write_file(dir.path / (doc_name(d) + ".md"), "anchor-present in body");
  }
  auto report = harness::score_run(store, dir.path, 500, 3);
  CHECK(report.overall == doctest::Approx(100.0));
  CHECK(report.ci_halfwidth == doctest::Approx(0.0));
}

TEST_CASE("score_run: missing candidates fail their tests and are listed") {
  TempDir dir("missing");
  core::TestStore store;
  store["present"].push_back(presence_test("p/t", "present", "c", "token-a"));
  store["absent"].push_back(presence_test("a/t", "absent", "c", "token-b"));
  write_file(dir.path / "present.md", "token-a");
  write_file(dir.path / "stray.md", "no tests for this doc");
  auto report = harness::score_run(store, dir.path, 0, 0);
  CHECK(report.per_category["c"].pass_rate == doctest::Approx(0.5));
  bool missing_listed = false, stray_listed = false;
  for (const auto& [doc, reason] : report.skipped_docs) {
    if (doc == "absent" && reason == "missing candidate") missing_listed = true;
    if (doc == "stray" && reason == "no tests") stray_listed = true;
  }
  CHECK(missing_listed);
  CHECK(stray_listed);
}

TEST_CASE("score_run: deterministic under a fixed seed") {
  TempDir dir("det");
  write_planted_candidates(dir.path);
  auto store = planted_store();
  auto a = harness::score_run(store, dir.path, 300, 42);
  auto b = harness::score_run(store, dir.path, 300, 42);
  CHECK(a.overall == b.overall);
  CHECK(a.ci_halfwidth == b.ci_halfwidth);
}

TEST_CASE("score_run: empty store is an error") {
  TempDir dir("empty");
  CHECK_THROWS_AS(harness::score_run(core::TestStore{}, dir.path, 10, 0),
                  core::StoreError);
}

TEST_CASE("score_run: CI halfwidth within 10% of an independent bootstrap") {
  TempDir dir("ci");
  write_planted_candidates(dir.path);
  // B large enough that quantile noise across the two RNG streams stays
  // well inside the 10% comparison band
  auto report = harness::score_run(planted_store(), dir.path, 20000, 11);

  // independent resampling straight from the planted pattern
  std::mt19937 rng(991);
  const int B = 20000;
  std::vector<double> stats(B);
  for (int b = 0; b < B; ++b) {
    int passed[4] = {0, 0, 0, 0};
    int total[4] = {0, 0, 0, 0};
    for (int i = 0; i < kDocs; ++i) {
      int d = static_cast<int>(rng() % kDocs);
      passed[d % 4] += plant(d);
      total[d % 4] += kTestsPerDoc;
    }
    double sum = 0.0;
    int cats = 0;
    for (int c = 0; c < 4; ++c) {
      if (total[c] == 0) continue;
      sum += static_cast<double>(passed[c]) / total[c];
      ++cats;
    }
    stats[b] = cats ? sum / cats * 100.0 : 0.0;
  }
  std::sort(stats.begin(), stats.end());
  auto quant = [&stats](double p) {
    double h = p * (stats.size() - 1);
    std::size_t lo = static_cast<std::size_t>(h);
    std::size_t hi = std::min(lo + 1, stats.size() - 1);
    return stats[lo] + (stats[hi] - stats[lo]) * (h - lo);
  };
  double oracle_halfwidth = (quant(0.975) - quant(0.025)) / 2.0;
  CHECK(report.ci_halfwidth ==
        doctest::Approx(oracle_halfwidth).epsilon(0.10));
}

TEST_CASE("reward server: health, scoring, isolation and errors") {
  core::TestStore store;
  store["d1"].push_back(presence_test("d1/t0", "d1", "c", "needle-one"));
  store["d1"].push_back(presence_test("d1/t1", "d1", "c", "needle-two"));

  harness::RewardServer server(store, reward::RewardConfig{}, harness::ServeOptions{});
  int port = server.start_background();
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);

  json request;
  request["items"] = json::array();
  request["items"].push_back(
      {{"doc_id", "d1"}, {"text", "has needle-one only"}, {"finished", true}});
  request["items"].push_back({{"doc_id", "ghost"}, {"text", "x"}, {"finished", true}});
  request["items"].push_back(
      {{"doc_id", "d1"}, {"text", "needle-one and needle-two"}, {"finished", false}});

  auto res = client.Post("/v1/reward", request.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  json body = json::parse(res->body);
  REQUIRE(body["rewards"].size() == 3);
  CHECK(body["rewards"][0]["pass_rate"] == doctest::Approx(0.5));
  CHECK(body["rewards"][1].contains("error"));
  CHECK(body["rewards"][1]["error"] == "unknown doc_id");
  CHECK(body["rewards"][2]["pass_rate"] == doctest::Approx(1.0));
  CHECK(body["rewards"][2]["eos_reward"] == doctest::Approx(0.0));

  // empty batch
  auto empty = client.Post("/v1/reward", R"({"items":[]})", "application/json");
  REQUIRE(empty);
  CHECK(empty->status == 200);
  CHECK(json::parse(empty->body)["rewards"].empty());

  // malformed JSON
  auto bad = client.Post("/v1/reward", "{nope", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  // wrong shape
  auto shape = client.Post("/v1/reward", R"({"batch":[]})", "application/json");
  REQUIRE(shape);
  CHECK(shape->status == 400);

  // malformed item entries stay isolated
  auto mixed = client.Post(
      "/v1/reward",
      R"({"items":[42,{"doc_id":"d1","text":"needle-one","finished":true},{"doc_id":7}]})",
      "application/json");
  REQUIRE(mixed);
  REQUIRE(mixed->status == 200);
  json mixed_body = json::parse(mixed->body);
  REQUIRE(mixed_body["rewards"].size() == 3);
  CHECK(mixed_body["rewards"][0]["error"] == "malformed item");
  CHECK(mixed_body["rewards"][1]["pass_rate"] == doctest::Approx(0.5));
  CHECK(mixed_body["rewards"][2]["error"] == "malformed item");

  server.stop();
}

TEST_CASE("reward server: permuting a batch permutes the responses") {
  core::TestStore store;
  for (int d = 0; d < 4; ++d) {
    store[doc_name(d)].push_back(presence_test(doc_name(d) + "/t", doc_name(d), "c",
                                               "tok-" + std::to_string(d)));
  }
  harness::RewardServer server(store, reward::RewardConfig{}, harness::ServeOptions{});
  int port = server.start_background();
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);

  auto item = [](int d, bool hit) {
    return json{{"doc_id", doc_name(d)},
                {"text", hit ? "tok-" + std::to_string(d) : "miss"},
                {"finished", true}};
  };
  json fwd, rev;
  fwd["items"] = {item(0, true), item(1, false), item(2, true), item(3, false)};
  rev["items"] = {item(3, false), item(2, true), item(1, false), item(0, true)};

  auto r1 = client.Post("/v1/reward", fwd.dump(), "application/json");
  auto r2 = client.Post("/v1/reward", rev.dump(), "application/json");
  REQUIRE(r1);
  REQUIRE(r2);
  json b1 = json::parse(r1->body), b2 = json::parse(r2->body);
  for (int i = 0; i < 4; ++i) {
    CHECK(b1["rewards"][i]["composite"] == b2["rewards"][3 - i]["composite"]);
    CHECK(b1["rewards"][i]["doc_id"] == b2["rewards"][3 - i]["doc_id"]);
  }
  server.stop();
}

TEST_CASE("reward server: include_outcomes returns per-test verdicts") {
  core::TestStore store;
  store["d1"].push_back(presence_test("d1/t0", "d1", "c", "alpha"));
  harness::RewardServer server(store, reward::RewardConfig{}, harness::ServeOptions{});
  int port = server.start_background();
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  json request;
  request["include_outcomes"] = true;
  request["items"] = {json{{"doc_id", "d1"}, {"text", "alpha"}, {"finished", true}}};
  auto res = client.Post("/v1/reward", request.dump(), "application/json");
  REQUIRE(res);
  json body = json::parse(res->body);
  REQUIRE(body["rewards"][0].contains("outcomes"));
  CHECK(body["rewards"][0]["outcomes"][0]["test_id"] == "d1/t0");
  CHECK(body["rewards"][0]["outcomes"][0]["passed"] == true);
  server.stop();
}

}  // TEST_SUITE
