#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ocrcheck/checks.hpp"
#include "ocrcheck/mathcmp.hpp"
#include "ocrcheck/tables.hpp"
#include "ocrcheck/types.hpp"

namespace ocrcheck::core {

struct MathRenderPayload {
  std::string reference;  // LaTeX
};

using Payload = std::variant<checks::PresencePayload, checks::AbsencePayload,
                             checks::OrderPayload, tables::TableRelationPayload,
                             MathRenderPayload, checks::NgramRepeatPayload,
                             checks::ScriptPurityPayload>;

struct TestCase {
  std::string id;
  std::string doc_id;
  int page = 1;
  std::string category;
  int max_diffs = 0;
  Payload payload;

  TestKind kind() const;
};

/// Store validation / parse failure; carries the 1-based line number when the
/// failure is tied to one.
class StoreError : public std::runtime_error {
 public:
  explicit StoreError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Immutable after load; safe to share across concurrent scorers.
using TestStore = std::map<std::string, std::vector<TestCase>>;  // doc_id -> tests

TestStore load_test_store(std::istream& in);
TestStore load_test_store_file(const std::string& path);

// Payload preconditions, applied at load time and by test generation.
void validate_test(const TestCase& test);

// JSONL round-trip. Serialization is byte-deterministic.
std::string serialize_test(const TestCase& test);
void write_test_store(const TestStore& store, std::ostream& out);
TestCase parse_test_line(std::string_view line, std::size_t line_no);

/// Per-page scratch: the markdown-stripped normalized prose plus lazily
/// extracted tables and math blocks. Not safe to share across threads; build
/// one per scoring call.
class PreparedPage {
 public:
  explicit PreparedPage(const CandidatePage& page);

  const CandidatePage& page() const { return page_; }
  const textnorm::NormalizedText& prose() const { return prose_; }
  const std::u32string& scalars() const;               // raw body, decoded
  const std::vector<tables::TableGrid>& grids() const;  // lazy
  const std::vector<std::string>& math_blocks() const;  // lazy

 private:
  const CandidatePage& page_;
  textnorm::NormalizedText prose_;
  mutable std::optional<std::u32string> scalars_;
  mutable std::optional<std::vector<tables::TableGrid>> grids_;
  mutable std::optional<std::vector<std::string>> math_blocks_;
};

TestOutcome run_one(const PreparedPage& page, const TestCase& test);

/// One outcome per test, in input order. A checker crash becomes a failed
/// outcome with the exception text, never a run abort.
std::vector<TestOutcome> run_tests(const CandidatePage& page,
                                   const std::vector<TestCase>& tests);

}  // namespace ocrcheck::core
