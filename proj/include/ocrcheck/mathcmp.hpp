#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ocrcheck/types.hpp"

namespace ocrcheck::mathcmp {

/// Parse failure. `out_of_subset` distinguishes well-formed TeX the engine
/// does not cover (unknown macros, environments) from malformed input
/// (unbalanced braces, dangling scripts); only the former gets the
/// token-comparison fallback.
class MathParseError : public std::runtime_error {
 public:
  MathParseError(const std::string& what, bool out_of_subset)
      : std::runtime_error(what), out_of_subset_(out_of_subset) {}
  bool out_of_subset() const { return out_of_subset_; }

 private:
  bool out_of_subset_;
};

struct MathNode {
  enum class Kind { Symbol, Row, Frac, Sqrt, Sup, Sub, SubSup, Delimited, Space };
  Kind kind = Kind::Row;
  char32_t glyph = 0;        // Symbol
  double space_width = 0.0;  // Space
  char32_t left_glyph = 0;   // Delimited; 0 means invisible ("." delimiter)
  char32_t right_glyph = 0;
  // Row: any; Frac: [num, den]; Sqrt: [radicand] or [radicand, index];
  // Sup/Sub: [base, script]; SubSup: [base, sub, sup]; Delimited: [body]
  std::vector<MathNode> children;

  bool operator==(const MathNode&) const = default;
};

/// TeX-subset parser: groups, \frac/\dfrac/\tfrac, \sqrt[i]{x}, ^ and _,
/// \left...\right, a Greek/operator macro table, \text, \,/\;/\quad spacing
/// and transparent \mathbf/\mathrm/\mathit. Unknown macros throw with
/// out_of_subset set.
MathNode parse_latex(std::string_view src);

struct GlyphBox {
  char32_t glyph = 0;
  double x = 0.0;
  double y = 0.0;
  double scale = 1.0;
};

/// Deterministic layout. Boxes come back sorted by x (ties by y, then glyph)
/// with x rescaled to [0, 1]; y keeps layout units with the baseline at 0.
std::vector<GlyphBox> layout(const MathNode& ast);

// Layout constants, exposed so tests can recompute expected positions.
inline constexpr double kSupOffset = 0.45;
inline constexpr double kSubOffset = -0.25;
inline constexpr double kScriptScale = 0.7;
inline constexpr double kFracOffset = 0.5;
inline constexpr double kSqrtIndexScale = 0.5;
inline constexpr double kSqrtIndexOffset = 0.3;

/// Same rendered arrangement: equal glyph sequences under the canonical
/// (x, y, glyph) order and, for every glyph pair, agreeing ternary relations
/// sign(x_g - x_h) and sign(y_g - y_h), where |delta| < tol counts as 0.
bool boxes_equivalent(const std::vector<GlyphBox>& a, const std::vector<GlyphBox>& b,
                      double tol);

/// Contents of every \( \), \[ \], $$ $$ and $ $ region, in order.
std::vector<std::string> extract_math_blocks(std::string_view body);

// Token sequence used when the reference falls outside the layout subset:
// braces and spacing dropped, \dfrac/\tfrac folded into \frac.
std::vector<std::string> fallback_tokens(std::string_view src);

inline constexpr double kDefaultTol = 0.08;

/// Passes iff any math block extracted from the candidate body lays out
/// equivalently to the reference (or token-matches it, for out-of-subset
/// references).
core::TestOutcome math_equivalent(const std::string& reference, std::string_view body,
                                  double tol = kDefaultTol);
core::TestOutcome math_equivalent(const std::string& reference,
                                  const std::vector<std::string>& candidate_blocks,
                                  double tol = kDefaultTol);

}  // namespace ocrcheck::mathcmp
