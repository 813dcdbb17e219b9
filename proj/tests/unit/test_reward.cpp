#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ocrcheck/reward.hpp"

using namespace ocrcheck;
using core::CandidatePage;
using core::TestCase;
using reward::RewardConfig;
using reward::TensorMap;

namespace {

TestCase presence_test(std::string id, std::string anchor) {
  TestCase t;
  t.id = std::move(id);
  t.doc_id = "d1";
  t.page = 1;
  t.category = "base";
  t.payload = checks::PresencePayload{std::move(anchor)};
  return t;
}

std::vector<TestCase> six_tests_four_pass() {
  std::vector<TestCase> tests;
  for (int i = 0; i < 4; ++i) {
    tests.push_back(presence_test("p" + std::to_string(i), "tok" + std::to_string(i)));
  }
  tests.push_back(presence_test("f0", "absent-one"));
  tests.push_back(presence_test("f1", "absent-two"));
  return tests;
}

CandidatePage finished_page(std::string body, bool with_meta) {
  CandidatePage page;
  page.doc_id = "d1";
  page.body = std::move(body);
  page.finished = true;
  if (with_meta) {
    page.front_matter =
        "primary_language: en\nrotation_correction: 0\nis_rotation_valid: true\n";
  }
  return page;
}

TensorMap map_of(std::vector<std::pair<std::string, std::vector<float>>> tensors) {
  TensorMap map;
  for (auto& [name, data] : tensors) {
    map.put(name, {static_cast<std::uint64_t>(data.size())}, data);
  }
  return map;
}

}  // namespace

TEST_SUITE("reward") {

TEST_CASE("four of six passes: pass rate 0.6667, composite 0.7222") {
  auto score = reward::compute_reward(finished_page("tok0 tok1 tok2 tok3", true),
                                      six_tests_four_pass(), RewardConfig{});
  CHECK(std::abs(score.pass_rate - 4.0 / 6.0) < 1e-9);
  CHECK(score.eos_reward == 1.0);
  CHECK(score.metadata_reward == 1.0);
  CHECK(std::abs(score.composite - (1.0 * (4.0 / 6.0) + 0.1 + 0.1) / 1.2) < 1e-9);
}

TEST_CASE("composite bounds") {
  auto full = reward::compute_reward(finished_page("tok0 tok1 tok2 tok3 absent-one absent-two", true),
                                     six_tests_four_pass(), RewardConfig{});
  CHECK(full.composite == doctest::Approx(1.0));

  CandidatePage empty;
  empty.doc_id = "d1";
  empty.body = "nothing that matches";
  empty.finished = false;
  auto zero = reward::compute_reward(empty, six_tests_four_pass(), RewardConfig{});
  CHECK(zero.composite == doctest::Approx(0.0));
}

TEST_CASE("empty test list is an error") {
  CHECK_THROWS_AS(reward::compute_reward(finished_page("x", true), {}, RewardConfig{}),
                  std::invalid_argument);
}

TEST_CASE("invalid weights are rejected") {
  RewardConfig zero;
  zero.w_tests = 0.0;
  CHECK_THROWS_AS(reward::compute_reward(finished_page("tok0", true),
                                         six_tests_four_pass(), zero),
                  std::invalid_argument);
  RewardConfig negative;
  negative.w_eos = -0.1;
  CHECK_THROWS_AS(reward::compute_reward(finished_page("tok0", true),
                                         six_tests_four_pass(), negative),
                  std::invalid_argument);
}

TEST_CASE("pass_rate matches an independent recount") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    std::string body;
    std::vector<TestCase> tests;
    for (int t = 0; t < 8; ++t) {
      std::string tok = "tok" + std::to_string(t);
      if (rng() % 2) body += tok + " ";
      tests.push_back(presence_test("t" + std::to_string(t), tok));
    }
    if (body.empty()) body = "filler";
    auto score = reward::compute_reward(finished_page(body, false), tests, RewardConfig{});
    std::size_t recount = 0;
    for (const auto& o : score.outcomes) recount += o.passed ? 1 : 0;
    CHECK(score.pass_rate ==
          doctest::Approx(static_cast<double>(recount) / score.outcomes.size()));
  }
}

TEST_CASE("composite is monotone in each component") {
  RewardConfig cfg;
  auto composite = [&cfg](double pass, double eos, double meta) {
    return (cfg.w_tests * pass + cfg.w_eos * eos + cfg.w_meta * meta) /
           (cfg.w_tests + cfg.w_eos + cfg.w_meta);
  };
  std::mt19937_64 rng(5);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 2000; ++i) {
    double p1 = uniform(), e1 = uniform(), m1 = uniform();
    double p2 = p1 + uniform() * (1 - p1);
    double e2 = e1 + uniform() * (1 - e1);
    double m2 = m1 + uniform() * (1 - m1);
    CHECK(composite(p2, e2, m2) >= composite(p1, e1, m1) - 1e-12);
  }
}

TEST_CASE("front matter: fully valid block") {
  auto fm = reward::parse_front_matter(
      "---\nprimary_language: en\nrotation_correction: 0\nis_rotation_valid: true\n---\nbody");
  CHECK(fm.present);
  RewardConfig cfg;
  CHECK(reward::count_valid_meta(fm, cfg.required_meta_keys) == 3);
}

TEST_CASE("front matter: invalid rotation leaves other keys intact") {
  auto fm = reward::parse_front_matter(
      "---\nprimary_language: en\nrotation_correction: 45\nis_rotation_valid: true\n---\n");
  RewardConfig cfg;
  CHECK(reward::count_valid_meta(fm, cfg.required_meta_keys) == 2);
}

TEST_CASE("front matter: absent block scores zero") {
  auto fm = reward::parse_front_matter("just body text\nmore text");
  CHECK_FALSE(fm.present);
  RewardConfig cfg;
  CHECK(reward::count_valid_meta(fm, cfg.required_meta_keys) == 0);
}

TEST_CASE("front matter value domains") {
  CHECK(reward::meta_value_valid("primary_language", "en"));
  CHECK(reward::meta_value_valid("primary_language", "deutsch"));
  CHECK_FALSE(reward::meta_value_valid("primary_language", ""));
  CHECK_FALSE(reward::meta_value_valid("primary_language", "en-US"));
  CHECK_FALSE(reward::meta_value_valid("primary_language", "verylongtag"));
  CHECK(reward::meta_value_valid("rotation_correction", "270"));
  CHECK_FALSE(reward::meta_value_valid("rotation_correction", "45"));
  CHECK(reward::meta_value_valid("is_rotation_valid", "false"));
  CHECK_FALSE(reward::meta_value_valid("is_rotation_valid", "maybe"));
}

TEST_CASE("split_completion: delimited block") {
  auto page = reward::split_completion("d1", "---\nprimary_language: en\n---\nThe body.\n",
                                       true);
  REQUIRE(page.front_matter.has_value());
  CHECK(page.front_matter->find("primary_language") != std::string::npos);
  CHECK(page.body == "The body.\n");
}

TEST_CASE("split_completion: bare keys require a known metadata key") {
  auto with_known = reward::split_completion(
      "d1", "primary_language: en\nrotation_correction: 90\n\nBody here.", true);
  CHECK(with_known.front_matter.has_value());
  CHECK(with_known.body.find("Body here.") != std::string::npos);

  auto prose = reward::split_completion("d1", "Note: this is prose\n\nBody here.", true);
  CHECK_FALSE(prose.front_matter.has_value());
  CHECK(prose.body.find("Note: this is prose") != std::string::npos);
}

TEST_CASE("split_completion: unterminated delimiter is body text") {
  auto page = reward::split_completion("d1", "---\nnot closed\nstill body", true);
  CHECK_FALSE(page.front_matter.has_value());
  CHECK(page.body.find("not closed") != std::string::npos);
}

TEST_CASE("soup: mean of two") {
  auto out = reward::soup({map_of({{"t", {0.0f}}}), map_of({{"t", {2.0f}}})});
  REQUIRE(out.find("t"));
  CHECK(out.find("t")->data[0] == 1.0f);
}

TEST_CASE("soup: idempotent on identical inputs") {
  std::mt19937_64 rng(17);
  std::vector<float> data(64);
  for (auto& v : data) v = static_cast<float>(rng() % 1000) / 7.0f;
  TensorMap map;
  map.put("w", {8, 8}, data);
  auto out = reward::soup({map, map, map});
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(out.find("w")->data[i] == data[i]);
  }
}

TEST_CASE("soup: name-set mismatch names the difference") {
  auto a = map_of({{"a", {1.0f}}});
  auto b = map_of({{"a", {1.0f}}, {"b", {2.0f}}});
  try {
    reward::soup({a, b});
    FAIL("expected mismatch error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }
}

TEST_CASE("soup: shape mismatch names the tensor") {
  TensorMap a, b;
  a.put("w", {2, 2}, {1, 2, 3, 4});
  b.put("w", {4}, {1, 2, 3, 4});
  try {
    reward::soup({a, b});
    FAIL("expected shape error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("w") != std::string::npos);
  }
}

TEST_CASE("soup: permutation invariance and scale equivariance") {
  std::mt19937_64 rng(19);
  auto make = [&rng](float scale) {
    TensorMap m;
    std::vector<float> d(16);
    for (auto& v : d) v = scale * (static_cast<float>(rng() % 100) - 50.0f) / 9.0f;
    m.put("w", {4, 4}, d);
    return m;
  };
  TensorMap a = make(1), b = make(1), c = make(1);
  auto s1 = reward::soup({a, b, c});
  auto s2 = reward::soup({c, a, b});
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(s1.find("w")->data[i] == s2.find("w")->data[i]);
  }

  auto scaled = [&](const TensorMap& m, float k) {
    TensorMap out;
    auto d = m.find("w")->data;
    for (auto& v : d) v *= k;
    out.put("w", m.find("w")->shape, d);
    return out;
  };
  auto lhs = reward::soup({scaled(a, 2), scaled(b, 2), scaled(c, 2)});
  auto rhs = scaled(reward::soup({a, b, c}), 2);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(lhs.find("w")->data[i] == doctest::Approx(rhs.find("w")->data[i]).epsilon(1e-6));
  }
}

TEST_CASE("tensor map file round-trip") {
  std::mt19937_64 rng(23);
  TensorMap map;
  std::vector<float> a(12), b(5);
  for (auto& v : a) v = static_cast<float>(rng()) / 1e12f;
  for (auto& v : b) v = -static_cast<float>(rng() % 77);
  map.put("layers.0.weight", {3, 4}, a);
  map.put("bias", {5}, b);

  std::stringstream buffer;
  reward::write_tensor_map(map, buffer);
  auto loaded = reward::read_tensor_map(buffer);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded.tensors()[0].name == "layers.0.weight");
  CHECK(loaded.find("layers.0.weight")->shape == std::vector<std::uint64_t>{3, 4});
  CHECK(loaded.find("layers.0.weight")->data == a);
  CHECK(loaded.find("bias")->data == b);

  std::stringstream junk("nope");
  CHECK_THROWS(reward::read_tensor_map(junk));
}

}  // TEST_SUITE
