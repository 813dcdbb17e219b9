#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocrcheck::textnorm {

// UTF-8 <-> scalar-value helpers. Invalid byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

bool is_space(char32_t c);

/// Normalized page text plus a map back into the original scalar stream.
///
/// Invariants: no two consecutive spaces, no leading/trailing space,
/// source_index is monotonically nondecreasing.
struct NormalizedText {
  std::u32string text;
  std::vector<std::size_t> source_index;  // text[i] came from scalar index source_index[i]
};

// Canonical composition (compact Latin/Greek table), soft-hyphen removal,
// typographic quote/dash mapping, whitespace collapse, trim.
NormalizedText normalize(std::string_view raw);
NormalizedText normalize(std::u32string_view raw);

// Removes emphasis markers, heading hashes, blockquote markers, link syntax
// (keeping the link text) and inline-code backticks. Table pipes and math
// delimiters pass through untouched; their own checkers consume them.
std::string strip_markdown(std::string_view body);

struct AnchorMatch {
  std::size_t begin = 0;  // [begin, end) in normalized scalar coordinates
  std::size_t end = 0;
  int distance = 0;
};

/// Leftmost window of `haystack` within edit distance `max_diffs` of the
/// normalized anchor. Leftmost means minimal start, then minimal end.
/// max_diffs = 0 degenerates to exact substring search.
std::optional<AnchorMatch> find_anchor(const NormalizedText& haystack,
                                       std::string_view anchor, int max_diffs);
std::optional<AnchorMatch> find_anchor(std::u32string_view haystack,
                                       std::u32string_view needle, int max_diffs);

// Plain Levenshtein distance over scalar values.
int levenshtein(std::u32string_view a, std::u32string_view b);

// Early-out variant used for whole-cell comparisons.
bool within_edit_distance(std::u32string_view a, std::u32string_view b, int max_diffs);

}  // namespace ocrcheck::textnorm
