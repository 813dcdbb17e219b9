#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocrcheck/core.hpp"

namespace ocrcheck::testgen {

class TestGenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundTruthPage {
  std::string doc_id;
  std::string html;
  std::uint64_t seed = 0;
};

struct GenConfig {
  int presence_samples = 4;
  int order_samples = 2;
  int table_cell_samples = 3;  // per table
  int min_anchor_words = 5;
  int max_anchor_words = 30;
  std::string category;  // empty: use the test kind as the category label
};

struct GenReport {
  std::vector<core::TestCase> tests;
  std::vector<std::string> warnings;  // tests dropped by the self-check, etc.
};

/// Derives test cases from the ground-truth HTML, deterministically under
/// the page seed: absence tests from <header>/<footer>, presence and
/// reading-order tests from unique body sentences, table-relation tests from
/// sampled unique cells, math tests from math-marked elements, plus one
/// repetition and one script-purity test. Every emitted test passes against
/// render_ground_truth(page); generation drops (and reports) any that do not.
GenReport generate_with_report(const GroundTruthPage& page, const GenConfig& cfg = {});
std::vector<core::TestCase> generate_tests(const GroundTruthPage& page,
                                           const GenConfig& cfg = {});

/// The page's HTML converted to the Markdown dialect candidates use:
/// headers/footers dropped, tables as pipe tables, math re-wrapped in
/// \( \) / \[ \].
std::string render_ground_truth(const GroundTruthPage& page);

// Stable per-document seed derived from a corpus-level seed.
std::uint64_t derive_page_seed(std::uint64_t corpus_seed, std::string_view doc_id);

}  // namespace ocrcheck::testgen
