#include <set>
#include <sstream>

#include "doctest.h"
#include "ocrcheck/tables.hpp"
#include "ocrcheck/testgen.hpp"
#include "support/fixtures.hpp"

using namespace ocrcheck;
using testgen::GenConfig;
using testgen::GroundTruthPage;

namespace {

GroundTruthPage page_from(std::string doc_id, std::string html, std::uint64_t seed = 1) {
  GroundTruthPage p;
  p.doc_id = std::move(doc_id);
  p.html = std::move(html);
  p.seed = seed;
  return p;
}

std::string serialize_all(const std::vector<core::TestCase>& tests) {
  std::string out;
  for (const auto& t : tests) out += core::serialize_test(t) + "\n";
  return out;
}

}  // namespace

TEST_SUITE("testgen") {

TEST_CASE("render: plain paragraph") {
  auto page = page_from("p", "<p>hello</p>");
  CHECK(testgen::render_ground_truth(page) == "hello\n");
}

TEST_CASE("render: header and footer text is excluded") {
  auto page = page_from(
      "p", "<header>Page 1 of 2 Journal Header</header><p>body text</p>"
           "<footer>Archive Footer Line Number Nine</footer>");
  std::string md = testgen::render_ground_truth(page);
  CHECK(md == "body text\n");
}

TEST_CASE("render: pipe table round-trips through the tables module") {
  std::string html =
      "<body><table><tr><th>K</th><th>V</th></tr>"
      "<tr><td rowspan=\"2\">x</td><td>1</td></tr>"
      "<tr><td>2</td></tr></table></body>";
  auto page = page_from("p", html);
  std::string md = testgen::render_ground_truth(page);
  auto from_md = tables::extract_tables(md);
  auto from_html = tables::extract_tables(html);
  REQUIRE(from_md.size() == 1);
  REQUIRE(from_html.size() == 1);
  CHECK(from_md[0].cells == from_html[0].cells);
  CHECK(from_md[0].rows == from_html[0].rows);
  CHECK(from_md[0].cols == from_html[0].cols);
}

TEST_CASE("render: math is rewrapped in TeX delimiters") {
  auto page = page_from(
      "p", "<p>with <span class=\"math\">x^{2}</span> inline</p>"
           "<div class=\"math display\">\\frac{a}{b}</div>");
  std::string md = testgen::render_ground_truth(page);
  CHECK(md.find("\\(x^{2}\\)") != std::string::npos);
  CHECK(md.find("\\[\\frac{a}{b}\\]") != std::string::npos);
}

TEST_CASE("render: empty body is rejected") {
  auto page = page_from("p", "<body><header>only boilerplate here</header></body>");
  CHECK_THROWS_AS(testgen::render_ground_truth(page), testgen::TestGenError);
}

TEST_CASE("generate: footer yields an absence test with the footer anchor") {
  auto page = page_from(
      "p",
      "<body><p>The measurement section discusses several stable results over time. "
      "A second sentence keeps the body text long enough for sampling.</p>"
      "<footer>Page 3 of 10 Journal of X</footer></body>");
  auto tests = testgen::generate_tests(page);
  bool found = false;
  for (const auto& t : tests) {
    if (t.kind() != core::TestKind::TextAbsence) continue;
    const auto& payload = std::get<checks::AbsencePayload>(t.payload);
    CHECK(payload.anchor == "Page 3 of 10 Journal of X");
    found = true;
  }
  CHECK(found);
}

TEST_CASE("generate: th table yields relation tests that include top_heading") {
  std::string html =
      "<body><p>Context paragraph with enough words to matter for sampling "
      "purposes in this fixture document.</p>"
      "<table><tr><th>Name</th><th>Qty</th><th>Unit</th></tr>"
      "<tr><td>bolt</td><td>40</td><td>kg</td></tr>"
      "<tr><td>nut</td><td>17</td><td>lb</td></tr></table></body>";
  auto tests = testgen::generate_tests(page_from("p", html));
  int table_tests = 0;
  for (const auto& t : tests) {
    if (t.kind() != core::TestKind::TableRelation) continue;
    ++table_tests;
    const auto& payload = std::get<tables::TableRelationPayload>(t.payload);
    bool has_top_heading = false;
    for (const auto& [dir, _] : payload.relations) {
      if (dir == tables::Direction::TopHeading) has_top_heading = true;
    }
    CHECK(has_top_heading);
  }
  CHECK(table_tests > 0);
  CHECK(table_tests <= 3);
}

TEST_CASE("generate: page without tables or math emits only the other kinds") {
  std::string html =
      "<body><header>Running Head Title Series Seven</header>"
      "<p>First sentence covers the calibration routine in useful detail today. "
      "Second sentence continues the description with more unique content words. "
      "Third sentence closes the paragraph with a final distinct observation.</p>"
      "<p>Another paragraph provides a couple of additional sentences for order tests. "
      "The closing sentence of the body mentions one more unique concept entirely.</p>"
      "</body>";
  auto tests = testgen::generate_tests(page_from("p", html));
  std::set<core::TestKind> kinds;
  for (const auto& t : tests) kinds.insert(t.kind());
  CHECK(kinds.count(core::TestKind::TextAbsence) == 1);
  CHECK(kinds.count(core::TestKind::TextPresence) == 1);
  CHECK(kinds.count(core::TestKind::ReadingOrder) == 1);
  CHECK(kinds.count(core::TestKind::NgramRepetition) == 1);
  CHECK(kinds.count(core::TestKind::ScriptPurity) == 1);
  CHECK(kinds.count(core::TestKind::TableRelation) == 0);
  CHECK(kinds.count(core::TestKind::MathRender) == 0);
}

TEST_CASE("self-consistency over the fixture corpus, with zero drops") {
  auto corpus = testfix::make_fixture_corpus(20);
  for (const auto& page : corpus) {
    CAPTURE(page.doc_id);
    auto report = testgen::generate_with_report(page);
    CHECK(report.warnings.empty());
    CHECK(report.tests.size() >= 4);

    std::string rendered = testgen::render_ground_truth(page);
    core::CandidatePage self;
    self.doc_id = page.doc_id;
    self.body = rendered;
    self.finished = true;
    auto outcomes = core::run_tests(self, report.tests);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      CAPTURE(report.tests[i].id);
      CAPTURE(outcomes[i].detail);
      CHECK(outcomes[i].passed);
    }
  }
}

TEST_CASE("generation is byte-deterministic under a fixed seed") {
  auto page = testfix::make_fixture_page(3);
  auto first = testgen::generate_tests(page);
  auto second = testgen::generate_tests(page);
  CHECK(serialize_all(first) == serialize_all(second));

  auto reseeded = page;
  reseeded.seed ^= 0xDEAD;
  auto third = testgen::generate_tests(reseeded);
  // same kinds may differ in sampling; determinism only fixes equal seeds
  CHECK(serialize_all(first) == serialize_all(testgen::generate_tests(page)));
  (void)third;
}

TEST_CASE("presence and order anchors occur exactly once in the page text") {
  for (int idx : {0, 5, 9}) {
    auto page = testfix::make_fixture_page(idx);
    auto tests = testgen::generate_tests(page);
    std::u32string haystack =
        textnorm::normalize(
            textnorm::strip_markdown(testgen::render_ground_truth(page)))
            .text;
    auto count = [&](const std::string& anchor) {
      std::u32string needle = textnorm::normalize(anchor).text;
      std::size_t n = 0, pos = 0;
      while ((pos = haystack.find(needle, pos)) != std::u32string::npos) {
        ++n;
        ++pos;
      }
      return n;
    };
    for (const auto& t : tests) {
      if (t.kind() == core::TestKind::TextPresence) {
        CHECK(count(std::get<checks::PresencePayload>(t.payload).anchor) == 1);
      } else if (t.kind() == core::TestKind::ReadingOrder) {
        const auto& p = std::get<checks::OrderPayload>(t.payload);
        CHECK(count(p.before) == 1);
        CHECK(count(p.after) == 1);
      }
    }
  }
}

TEST_CASE("derive_page_seed is stable and id-sensitive") {
  CHECK(testgen::derive_page_seed(1, "a") == testgen::derive_page_seed(1, "a"));
  CHECK(testgen::derive_page_seed(1, "a") != testgen::derive_page_seed(1, "b"));
  CHECK(testgen::derive_page_seed(1, "a") != testgen::derive_page_seed(2, "a"));
}

}  // TEST_SUITE
