#include "ocrcheck/checks.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace ocrcheck::checks {

using core::TestOutcome;
using textnorm::NormalizedText;

namespace {

std::string ellipsize(std::string_view s, std::size_t limit = 60) {
  if (s.size() <= limit) return std::string(s);
  return std::string(s.substr(0, limit)) + "...";
}

NormalizedText prepare(std::string_view body) {
  return textnorm::normalize(textnorm::strip_markdown(body));
}

std::vector<std::u32string_view> split_words(const std::u32string& text) {
  std::vector<std::u32string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == U' ') ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != U' ') ++i;
    if (i > start) words.push_back(std::u32string_view(text).substr(start, i - start));
  }
  return words;
}

}  // namespace

TestOutcome check_presence(const NormalizedText& prose, const PresencePayload& payload,
                           int max_diffs) {
  TestOutcome out;
  if (textnorm::find_anchor(prose, payload.anchor, max_diffs)) {
    out.passed = true;
  } else {
    out.passed = false;
    out.detail = "anchor not found: \"" + ellipsize(payload.anchor) + "\"";
  }
  return out;
}

TestOutcome check_presence(std::string_view body, const PresencePayload& payload,
                           int max_diffs) {
  return check_presence(prepare(body), payload, max_diffs);
}

TestOutcome check_absence(const NormalizedText& prose, const AbsencePayload& payload,
                          int max_diffs) {
  TestOutcome out;
  if (auto match = textnorm::find_anchor(prose, payload.anchor, max_diffs)) {
    out.passed = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, " found at offset %zu", match->begin);
    out.detail = "forbidden anchor \"" + ellipsize(payload.anchor) + "\"" + buf;
  } else {
    out.passed = true;
  }
  return out;
}

TestOutcome check_absence(std::string_view body, const AbsencePayload& payload,
                          int max_diffs) {
  return check_absence(prepare(body), payload, max_diffs);
}

TestOutcome check_order(const NormalizedText& prose, const OrderPayload& payload,
                        int max_diffs) {
  TestOutcome out;
  auto before = textnorm::find_anchor(prose, payload.before, max_diffs);
  if (!before) {
    out.detail = "'before' anchor not found: \"" + ellipsize(payload.before) + "\"";
    return out;
  }
  auto after = textnorm::find_anchor(prose, payload.after, max_diffs);
  if (!after) {
    out.detail = "'after' anchor not found: \"" + ellipsize(payload.after) + "\"";
    return out;
  }
  if (before->end > after->begin) {
    out.detail = "anchors out of order: 'before' ends at " +
                 std::to_string(before->end) + ", 'after' begins at " +
                 std::to_string(after->begin);
    return out;
  }
  std::u32string_view gap =
      std::u32string_view(prose.text).substr(before->end, after->begin - before->end);
  for (const auto& forbidden : payload.forbidden_between) {
    NormalizedText needle = textnorm::normalize(forbidden);
    if (needle.text.empty()) continue;
    if (textnorm::find_anchor(gap, needle.text, max_diffs)) {
      out.detail = "forbidden anchor between: \"" + ellipsize(forbidden) + "\"";
      return out;
    }
  }
  out.passed = true;
  return out;
}

TestOutcome check_order(std::string_view body, const OrderPayload& payload,
                        int max_diffs) {
  return check_order(prepare(body), payload, max_diffs);
}

TestOutcome check_ngram_repeat(const NormalizedText& prose,
                               const NgramRepeatPayload& payload) {
  TestOutcome out;
  out.passed = true;
  auto words = split_words(prose.text);
  const std::size_t len = words.size();
  for (int n = payload.n_min; n <= payload.n_max; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    if (len < un * 2) break;
    // eq[j] == true when words[j..j+n) and words[j+n..j+2n) start identically;
    // a run of L consecutive eq positions yields L/n + 1 repeats.
    std::size_t run_start = 0;
    std::size_t j = 0;
    while (j + un < len) {
      if (words[j] == words[j + un]) {
        ++j;
        continue;
      }
      std::size_t run = j - run_start;
      if (run / un + 1 >= static_cast<std::size_t>(payload.min_repeats)) {
        break;
      }
      ++j;
      run_start = j;
    }
    std::size_t run = j - run_start;
    std::size_t repeats = run / un + 1;
    if (repeats >= static_cast<std::size_t>(payload.min_repeats)) {
      std::u32string gram;
      for (std::size_t k = 0; k < un; ++k) {
        if (k) gram.push_back(U' ');
        gram.append(words[run_start + k]);
      }
      out.passed = false;
      out.detail = std::to_string(n) + "-gram \"" +
                   ellipsize(textnorm::encode_utf8(gram)) + "\" repeats " +
                   std::to_string(repeats) + "x";
      return out;
    }
  }
  return out;
}

TestOutcome check_ngram_repeat(std::string_view body, const NgramRepeatPayload& payload) {
  return check_ngram_repeat(prepare(body), payload);
}

ScriptTally tally_scripts(std::u32string_view scalars) {
  std::map<uniscript::Script, std::size_t> counts;
  std::size_t total = 0;
  for (char32_t c : scalars) {
    if (!uniscript::is_alphabetic(c)) continue;
    ++total;
    ++counts[uniscript::script_of(c)];
  }
  ScriptTally tally;
  tally.total_alphabetic = total;
  tally.counts.assign(counts.begin(), counts.end());
  std::stable_sort(tally.counts.begin(), tally.counts.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return tally;
}

TestOutcome check_script_purity(std::u32string_view body_scalars,
                                const ScriptPurityPayload& payload) {
  TestOutcome out;
  std::size_t total = 0, foreign = 0;
  for (char32_t c : body_scalars) {
    if (!uniscript::is_alphabetic(c)) continue;
    ++total;
    uniscript::Script s = uniscript::script_of(c);
    bool target = std::find(payload.target_scripts.begin(),
                            payload.target_scripts.end(), s) !=
                  payload.target_scripts.end();
    if (!target) ++foreign;
  }
  double fraction = total == 0 ? 0.0 : static_cast<double>(foreign) / static_cast<double>(total);
  if (fraction <= payload.max_foreign_fraction) {
    out.passed = true;
  } else {
    char buf[128];
    std::snprintf(buf, sizeof buf, "foreign fraction %.4f (%zu/%zu) exceeds %.4f",
                  fraction, foreign, total, payload.max_foreign_fraction);
    out.detail = buf;
  }
  return out;
}

TestOutcome check_script_purity(std::string_view body, const ScriptPurityPayload& payload) {
  return check_script_purity(textnorm::decode_utf8(body), payload);
}

}  // namespace ocrcheck::checks
