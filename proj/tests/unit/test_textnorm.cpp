#include <random>

#include "doctest.h"
#include "ocrcheck/textnorm.hpp"
#include "support/oracles.hpp"

using namespace ocrcheck;
using textnorm::find_anchor;
using textnorm::normalize;
using textnorm::strip_markdown;

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const char* pool = "abcde fgh  ij\nkl";
  std::size_t len = rng() % (max_len + 1);
  std::string s;
  s.reserve(len);
  for (std::size_t i = 0; i < len; ++i) s.push_back(pool[rng() % 16]);
  return s;
}

}  // namespace

TEST_SUITE("textnorm") {

TEST_CASE("normalize collapses whitespace runs") {
  CHECK(textnorm::encode_utf8(normalize("a\n\n  b").text) == "a b");
  CHECK(textnorm::encode_utf8(normalize("  x  ").text) == "x");
  CHECK(normalize("").text.empty());
  CHECK(normalize(" \t\n").text.empty());
}

TEST_CASE("normalize maps typographic quotes and dashes") {
  CHECK(textnorm::encode_utf8(normalize("don’t").text) == "don't");
  CHECK(textnorm::encode_utf8(normalize("“quoted”").text) == "\"quoted\"");
  CHECK(textnorm::encode_utf8(normalize("a–b—c").text) == "a-b-c");
}

TEST_CASE("normalize removes soft hyphens") {
  CHECK(textnorm::encode_utf8(normalize("co­operate").text) == "cooperate");
}

TEST_CASE("normalize composes combining sequences") {
  // e + COMBINING ACUTE -> U+00E9
  auto out = normalize("café");
  CHECK(out.text == U"café");
  // composed input is untouched
  CHECK(normalize("café").text == U"café");
}

TEST_CASE("normalize is idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string raw = random_text(rng, 80);
    auto once = normalize(raw);
    auto twice = normalize(textnorm::encode_utf8(once.text));
    CHECK(once.text == twice.text);
  }
  auto typographic = normalize("a’b “c” co­op  é");
  CHECK(normalize(textnorm::encode_utf8(typographic.text)).text == typographic.text);
}

TEST_CASE("offset map is monotonically nondecreasing") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto out = normalize(random_text(rng, 60));
    REQUIRE(out.source_index.size() == out.text.size());
    for (std::size_t k = 1; k < out.source_index.size(); ++k) {
      CHECK(out.source_index[k - 1] <= out.source_index[k]);
    }
  }
}

TEST_CASE("strip_markdown removes heading hashes") {
  CHECK(strip_markdown("# Title") == "Title");
  CHECK(strip_markdown("### Deep heading") == "Deep heading");
  CHECK(strip_markdown("#not-a-heading") == "#not-a-heading");
}

TEST_CASE("strip_markdown removes emphasis and link syntax") {
  CHECK(strip_markdown("**bold** and [x](http://y)") == "bold and x");
  CHECK(strip_markdown("snake_case stays") == "snake_case stays");
  CHECK(strip_markdown("_lead_ and tail_") == "lead and tail");
  CHECK(strip_markdown("![alt text](img.png)") == "alt text");
}

TEST_CASE("strip_markdown keeps inline-code content") {
  CHECK(strip_markdown("`code` span") == "code span");
}

TEST_CASE("strip_markdown strips blockquote markers, keeps pipes and math") {
  CHECK(strip_markdown("> quoted line") == "quoted line");
  CHECK(strip_markdown("> > nested quote") == "nested quote");
  CHECK(strip_markdown("|a|b|") == "|a|b|");
  CHECK(strip_markdown("\\(x^2\\) and $y$") == "\\(x^2\\) and $y$");
}

TEST_CASE("find_anchor exact match") {
  auto hay = normalize("the quick brown fox");
  auto m = find_anchor(hay, "quick brown", 0);
  REQUIRE(m.has_value());
  CHECK(m->begin == 4);
  CHECK(m->end == 15);
  CHECK(m->distance == 0);
}

TEST_CASE("find_anchor fuzzy match verified against the window oracle") {
  auto hay = normalize("the quikc brown fox");
  auto m = find_anchor(hay, "quick brown", 2);
  REQUIRE(m.has_value());
  auto want = oracles::find_window(hay.text, normalize("quick brown").text, 2);
  REQUIRE(want.has_value());
  CHECK(m->begin == want->begin);
  CHECK(m->end == want->end);
  CHECK(m->distance == want->distance);
  CHECK(m->distance <= 2);
}

TEST_CASE("find_anchor absence") {
  auto hay = normalize("hello");
  CHECK_FALSE(find_anchor(hay, "world", 0).has_value());
  CHECK_FALSE(find_anchor(hay, "", 0).has_value());
}

TEST_CASE("find_anchor with max_diffs 0 agrees with naive substring search") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 2000; ++i) {
    std::u32string hay = normalize(random_text(rng, 50)).text;
    std::u32string needle = normalize(random_text(rng, 8)).text;
    if (needle.empty()) continue;
    auto mine = find_anchor(std::u32string_view(hay), std::u32string_view(needle), 0);
    std::size_t naive = hay.find(needle);
    if (naive == std::u32string::npos) {
      CHECK_FALSE(mine.has_value());
    } else {
      REQUIRE(mine.has_value());
      CHECK(mine->begin == naive);
    }
  }
}

TEST_CASE("find_anchor agrees with the brute-force window oracle") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 600; ++i) {
    std::u32string hay = normalize(random_text(rng, 40)).text;
    std::u32string needle = normalize(random_text(rng, 10)).text;
    if (needle.empty()) continue;
    int k = static_cast<int>(rng() % 3);
    auto mine = find_anchor(std::u32string_view(hay), std::u32string_view(needle), k);
    auto want = oracles::find_window(hay, needle, k);
    REQUIRE(mine.has_value() == want.has_value());
    if (mine) {
      CHECK(mine->begin == want->begin);
      CHECK(mine->end == want->end);
      CHECK(mine->distance == want->distance);
    }
  }
}

TEST_CASE("levenshtein basics") {
  CHECK(textnorm::levenshtein(U"kitten", U"sitting") == 3);
  CHECK(textnorm::levenshtein(U"", U"abc") == 3);
  CHECK(textnorm::within_edit_distance(U"abc", U"abd", 1));
  CHECK_FALSE(textnorm::within_edit_distance(U"abc", U"xyz", 2));
}

}  // TEST_SUITE
