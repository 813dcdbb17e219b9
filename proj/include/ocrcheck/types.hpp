#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocrcheck::core {

enum class TestKind {
  TextPresence,
  TextAbsence,
  ReadingOrder,
  TableRelation,
  MathRender,
  NgramRepetition,
  ScriptPurity,
};

// Wire names for TestKind, as used in the JSONL store (`type` field).
std::string_view kind_name(TestKind kind);
std::optional<TestKind> kind_from_name(std::string_view name);

/// One model completion for a document page. `body` excludes the front
/// matter; `finished` records whether generation terminated with EOS.
struct CandidatePage {
  std::string doc_id;
  std::string body;
  std::optional<std::string> front_matter;  // raw block content, without delimiters
  bool finished = true;
};

/// Per-test verdict. Strictly binary; `detail` explains failures.
struct TestOutcome {
  std::string test_id;
  bool passed = false;
  std::string detail;
};

struct PageScore {
  std::string doc_id;
  std::vector<TestOutcome> outcomes;
  double pass_rate = 0.0;
  double eos_reward = 0.0;
  double metadata_reward = 0.0;
  double composite = 0.0;
};

}  // namespace ocrcheck::core
