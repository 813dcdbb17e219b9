#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ocrcheck/textnorm.hpp"
#include "ocrcheck/types.hpp"
#include "ocrcheck/unicode_script.hpp"

namespace ocrcheck::checks {

struct PresencePayload {
  std::string anchor;
};

struct AbsencePayload {
  std::string anchor;
};

struct OrderPayload {
  std::string before;
  std::string after;
  std::vector<std::string> forbidden_between;
};

struct NgramRepeatPayload {
  int n_min = 3;
  int n_max = 30;
  int min_repeats = 4;
};

struct ScriptPurityPayload {
  std::vector<uniscript::Script> target_scripts;
  double max_foreign_fraction = 0.02;
};

// Prose variants take the page body already markdown-stripped and normalized;
// run_tests prepares that once per page. The string_view overloads are
// single-shot conveniences.

core::TestOutcome check_presence(const textnorm::NormalizedText& prose,
                                 const PresencePayload& payload, int max_diffs);
core::TestOutcome check_presence(std::string_view body, const PresencePayload& payload,
                                 int max_diffs);

core::TestOutcome check_absence(const textnorm::NormalizedText& prose,
                                const AbsencePayload& payload, int max_diffs);
core::TestOutcome check_absence(std::string_view body, const AbsencePayload& payload,
                                int max_diffs);

/// Passes iff both anchors are found (leftmost match), `before` ends at or
/// before `after` begins, and no forbidden anchor matches inside the gap.
core::TestOutcome check_order(const textnorm::NormalizedText& prose,
                              const OrderPayload& payload, int max_diffs);
core::TestOutcome check_order(std::string_view body, const OrderPayload& payload,
                              int max_diffs);

/// Fails iff some word-level n-gram with n in [n_min, n_max] repeats
/// consecutively at least min_repeats times.
core::TestOutcome check_ngram_repeat(const textnorm::NormalizedText& prose,
                                     const NgramRepeatPayload& payload);
core::TestOutcome check_ngram_repeat(std::string_view body,
                                     const NgramRepeatPayload& payload);

/// Fraction of alphabetic characters whose script is outside
/// target_scripts (Common/Inherited never count as foreign); passes iff the
/// fraction is <= max_foreign_fraction (inclusive).
core::TestOutcome check_script_purity(std::u32string_view body_scalars,
                                      const ScriptPurityPayload& payload);
core::TestOutcome check_script_purity(std::string_view body,
                                      const ScriptPurityPayload& payload);

// Tally used by the purity check and by test generation.
struct ScriptTally {
  std::vector<std::pair<uniscript::Script, std::size_t>> counts;  // descending
  std::size_t total_alphabetic = 0;
};
ScriptTally tally_scripts(std::u32string_view scalars);

}  // namespace ocrcheck::checks
