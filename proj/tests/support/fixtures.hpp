#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocrcheck/testgen.hpp"

namespace ocrcheck::testfix {

/// Deterministic synthetic ground-truth page. Pages cycle through
/// headers/footers, figure captions, spanned tables, inline/display math,
/// multi-column wrappers and occasional non-Latin passages.
testgen::GroundTruthPage make_fixture_page(int index);

/// `count` pages, doc ids fixture-000 .. fixture-(count-1).
std::vector<testgen::GroundTruthPage> make_fixture_corpus(int count);

}  // namespace ocrcheck::testfix
