#include "ocrcheck/textnorm.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace ocrcheck::textnorm {

namespace {

constexpr char32_t kReplacement = 0xFFFD;
constexpr char32_t kSoftHyphen = 0x00AD;

struct Composition {
  char32_t base;
  char32_t mark;
  char32_t composed;
};

// Compact canonical-composition table: Latin-1 Supplement, Latin Extended-A
// and monotonic Greek. Pairs outside the table are left decomposed.
constexpr Composition kCompositions[] = {
    {U'A', 0x300, 0x00C0}, {U'A', 0x301, 0x00C1}, {U'A', 0x302, 0x00C2},
    {U'A', 0x303, 0x00C3}, {U'A', 0x308, 0x00C4}, {U'A', 0x30A, 0x00C5},
    {U'C', 0x327, 0x00C7}, {U'E', 0x300, 0x00C8}, {U'E', 0x301, 0x00C9},
    {U'E', 0x302, 0x00CA}, {U'E', 0x308, 0x00CB}, {U'I', 0x300, 0x00CC},
    {U'I', 0x301, 0x00CD}, {U'I', 0x302, 0x00CE}, {U'I', 0x308, 0x00CF},
    {U'N', 0x303, 0x00D1}, {U'O', 0x300, 0x00D2}, {U'O', 0x301, 0x00D3},
    {U'O', 0x302, 0x00D4}, {U'O', 0x303, 0x00D5}, {U'O', 0x308, 0x00D6},
    {U'U', 0x300, 0x00D9}, {U'U', 0x301, 0x00DA}, {U'U', 0x302, 0x00DB},
    {U'U', 0x308, 0x00DC}, {U'Y', 0x301, 0x00DD},
    {U'a', 0x300, 0x00E0}, {U'a', 0x301, 0x00E1}, {U'a', 0x302, 0x00E2},
    {U'a', 0x303, 0x00E3}, {U'a', 0x308, 0x00E4}, {U'a', 0x30A, 0x00E5},
    {U'c', 0x327, 0x00E7}, {U'e', 0x300, 0x00E8}, {U'e', 0x301, 0x00E9},
    {U'e', 0x302, 0x00EA}, {U'e', 0x308, 0x00EB}, {U'i', 0x300, 0x00EC},
    {U'i', 0x301, 0x00ED}, {U'i', 0x302, 0x00EE}, {U'i', 0x308, 0x00EF},
    {U'n', 0x303, 0x00F1}, {U'o', 0x300, 0x00F2}, {U'o', 0x301, 0x00F3},
    {U'o', 0x302, 0x00F4}, {U'o', 0x303, 0x00F5}, {U'o', 0x308, 0x00F6},
    {U'u', 0x300, 0x00F9}, {U'u', 0x301, 0x00FA}, {U'u', 0x302, 0x00FB},
    {U'u', 0x308, 0x00FC}, {U'y', 0x301, 0x00FD}, {U'y', 0x308, 0x00FF},
    {U'A', 0x304, 0x0100}, {U'a', 0x304, 0x0101}, {U'A', 0x306, 0x0102},
    {U'a', 0x306, 0x0103}, {U'A', 0x328, 0x0104}, {U'a', 0x328, 0x0105},
    {U'C', 0x301, 0x0106}, {U'c', 0x301, 0x0107}, {U'C', 0x302, 0x0108},
    {U'c', 0x302, 0x0109}, {U'C', 0x307, 0x010A}, {U'c', 0x307, 0x010B},
    {U'C', 0x30C, 0x010C}, {U'c', 0x30C, 0x010D}, {U'D', 0x30C, 0x010E},
    {U'd', 0x30C, 0x010F},
    {U'E', 0x304, 0x0112}, {U'e', 0x304, 0x0113}, {U'E', 0x306, 0x0114},
    {U'e', 0x306, 0x0115}, {U'E', 0x307, 0x0116}, {U'e', 0x307, 0x0117},
    {U'E', 0x328, 0x0118}, {U'e', 0x328, 0x0119}, {U'E', 0x30C, 0x011A},
    {U'e', 0x30C, 0x011B}, {U'G', 0x302, 0x011C}, {U'g', 0x302, 0x011D},
    {U'G', 0x306, 0x011E}, {U'g', 0x306, 0x011F}, {U'G', 0x307, 0x0120},
    {U'g', 0x307, 0x0121}, {U'G', 0x327, 0x0122}, {U'g', 0x327, 0x0123},
    {U'H', 0x302, 0x0124}, {U'h', 0x302, 0x0125},
    {U'I', 0x303, 0x0128}, {U'i', 0x303, 0x0129}, {U'I', 0x304, 0x012A},
    {U'i', 0x304, 0x012B}, {U'I', 0x306, 0x012C}, {U'i', 0x306, 0x012D},
    {U'I', 0x328, 0x012E}, {U'i', 0x328, 0x012F}, {U'I', 0x307, 0x0130},
    {U'J', 0x302, 0x0134}, {U'j', 0x302, 0x0135}, {U'K', 0x327, 0x0136},
    {U'k', 0x327, 0x0137}, {U'L', 0x301, 0x0139}, {U'l', 0x301, 0x013A},
    {U'L', 0x327, 0x013B}, {U'l', 0x327, 0x013C}, {U'L', 0x30C, 0x013D},
    {U'l', 0x30C, 0x013E}, {U'N', 0x301, 0x0143}, {U'n', 0x301, 0x0144},
    {U'N', 0x327, 0x0145}, {U'n', 0x327, 0x0146}, {U'N', 0x30C, 0x0147},
    {U'n', 0x30C, 0x0148}, {U'O', 0x304, 0x014C}, {U'o', 0x304, 0x014D},
    {U'O', 0x306, 0x014E}, {U'o', 0x306, 0x014F}, {U'O', 0x30B, 0x0150},
    {U'o', 0x30B, 0x0151}, {U'R', 0x301, 0x0154}, {U'r', 0x301, 0x0155},
    {U'R', 0x327, 0x0156}, {U'r', 0x327, 0x0157}, {U'R', 0x30C, 0x0158},
    {U'r', 0x30C, 0x0159}, {U'S', 0x301, 0x015A}, {U's', 0x301, 0x015B},
    {U'S', 0x302, 0x015C}, {U's', 0x302, 0x015D}, {U'S', 0x327, 0x015E},
    {U's', 0x327, 0x015F}, {U'S', 0x30C, 0x0160}, {U's', 0x30C, 0x0161},
    {U'T', 0x327, 0x0162}, {U't', 0x327, 0x0163}, {U'T', 0x30C, 0x0164},
    {U't', 0x30C, 0x0165}, {U'U', 0x303, 0x0168}, {U'u', 0x303, 0x0169},
    {U'U', 0x304, 0x016A}, {U'u', 0x304, 0x016B}, {U'U', 0x306, 0x016C},
    {U'u', 0x306, 0x016D}, {U'U', 0x30A, 0x016E}, {U'u', 0x30A, 0x016F},
    {U'U', 0x30B, 0x0170}, {U'u', 0x30B, 0x0171}, {U'U', 0x328, 0x0172},
    {U'u', 0x328, 0x0173}, {U'W', 0x302, 0x0174}, {U'w', 0x302, 0x0175},
    {U'Y', 0x302, 0x0176}, {U'y', 0x302, 0x0177}, {U'Y', 0x308, 0x0178},
    {U'Z', 0x301, 0x0179}, {U'z', 0x301, 0x017A}, {U'Z', 0x307, 0x017B},
    {U'z', 0x307, 0x017C}, {U'Z', 0x30C, 0x017D}, {U'z', 0x30C, 0x017E},
    {0x0391, 0x301, 0x0386}, {0x0395, 0x301, 0x0388}, {0x0397, 0x301, 0x0389},
    {0x0399, 0x301, 0x038A}, {0x039F, 0x301, 0x038C}, {0x03A5, 0x301, 0x038E},
    {0x03A9, 0x301, 0x038F}, {0x03B1, 0x301, 0x03AC}, {0x03B5, 0x301, 0x03AD},
    {0x03B7, 0x301, 0x03AE}, {0x03B9, 0x301, 0x03AF}, {0x03BF, 0x301, 0x03CC},
    {0x03C5, 0x301, 0x03CD}, {0x03C9, 0x301, 0x03CE}, {0x03B9, 0x308, 0x03CA},
    {0x03C5, 0x308, 0x03CB},
};

char32_t compose_pair(char32_t base, char32_t mark) {
  for (const auto& c : kCompositions) {
    if (c.base == base && c.mark == mark) return c.composed;
  }
  return 0;
}

char32_t map_typographic(char32_t c) {
  switch (c) {
    case 0x2018: case 0x2019: return U'\'';
    case 0x201C: case 0x201D: return U'"';
    case 0x2013: case 0x2014: return U'-';
    default: return c;
  }
}

}  // namespace

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = kReplacement;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char bk = static_cast<unsigned char>(s[i + k]);
      if ((bk & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
        (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

NormalizedText normalize(std::u32string_view raw) {
  // (value, original scalar index) pairs carried through every stage.
  std::vector<std::pair<char32_t, std::size_t>> buf;
  buf.reserve(raw.size());

  for (std::size_t i = 0; i < raw.size(); ++i) {
    char32_t c = raw[i];
    if (!buf.empty()) {
      if (char32_t composed = compose_pair(buf.back().first, c)) {
        buf.back().first = composed;
        continue;
      }
    }
    buf.emplace_back(c, i);
  }

  NormalizedText out;
  out.text.reserve(buf.size());
  out.source_index.reserve(buf.size());
  bool pending_space = false;
  std::size_t pending_index = 0;
  for (auto [c, idx] : buf) {
    if (c == kSoftHyphen) continue;
    c = map_typographic(c);
    if (is_space(c)) {
      if (!pending_space) {
        pending_space = true;
        pending_index = idx;
      }
      continue;
    }
    if (pending_space) {
      if (!out.text.empty()) {
        out.text.push_back(U' ');
        out.source_index.push_back(pending_index);
      }
      pending_space = false;
    }
    out.text.push_back(c);
    out.source_index.push_back(idx);
  }
  return out;
}

NormalizedText normalize(std::string_view raw) { return normalize(decode_utf8(raw)); }

namespace {

// Strips heading hashes and blockquote markers from the start of a line,
// returning the index where content begins.
std::size_t line_prefix_end(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t start = i;
  // blockquote markers, possibly nested
  bool stripped = false;
  while (i < line.size() && line[i] == '>') {
    ++i;
    if (i < line.size() && line[i] == ' ') ++i;
    stripped = true;
  }
  if (stripped) return i;
  // ATX heading
  std::size_t h = i;
  while (h < line.size() && line[h] == '#') ++h;
  if (h > i && h - i <= 6 && (h == line.size() || line[h] == ' ')) {
    return h < line.size() ? h + 1 : h;
  }
  return start;
}

bool is_word_byte(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || static_cast<unsigned char>(c) >= 0x80;
}

void strip_inline(std::string_view line, std::string& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '!' && i + 1 < line.size() && line[i + 1] == '[') {
      ++i;  // image: fall through to link handling for the alt text
      continue;
    }
    if (c == '[') {
      std::size_t close = line.find(']', i + 1);
      if (close != std::string_view::npos && close + 1 < line.size() &&
          line[close + 1] == '(') {
        std::size_t paren = line.find(')', close + 2);
        if (paren != std::string_view::npos) {
          strip_inline(line.substr(i + 1, close - i - 1), out);
          i = paren + 1;
          continue;
        }
      }
      out.push_back(c);
      ++i;
      continue;
    }
    if (c == '`') {
      std::size_t run = i;
      while (run < line.size() && line[run] == '`') ++run;
      // keep the span content, drop the backticks
      i = run;
      continue;
    }
    if (c == '*') {
      ++i;
      continue;
    }
    if (c == '_') {
      bool prev_word = i > 0 && is_word_byte(line[i - 1]);
      bool next_word = i + 1 < line.size() && is_word_byte(line[i + 1]);
      if (prev_word && next_word) out.push_back(c);  // intraword underscore is literal
      ++i;
      continue;
    }
    out.push_back(c);
    ++i;
  }
}

}  // namespace

std::string strip_markdown(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t eol = body.find('\n', pos);
    std::string_view line = body.substr(
        pos, eol == std::string_view::npos ? body.size() - pos : eol - pos);
    strip_inline(line.substr(line_prefix_end(line)), out);
    if (eol == std::string_view::npos) break;
    out.push_back('\n');
    pos = eol + 1;
  }
  return out;
}

int levenshtein(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = b.size();
  std::vector<int> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 0; i < a.size(); ++i) {
    cur[0] = static_cast<int>(i) + 1;
    for (std::size_t j = 0; j < n; ++j) {
      cur[j + 1] = std::min({prev[j + 1] + 1, cur[j] + 1,
                             prev[j] + (a[i] == b[j] ? 0 : 1)});
    }
    prev.swap(cur);
  }
  return prev[n];
}

bool within_edit_distance(std::u32string_view a, std::u32string_view b, int max_diffs) {
  const auto la = static_cast<long>(a.size()), lb = static_cast<long>(b.size());
  if (std::abs(la - lb) > max_diffs) return false;
  if (max_diffs == 0) return a == b;
  const std::size_t n = b.size();
  std::vector<int> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 0; i < a.size(); ++i) {
    cur[0] = static_cast<int>(i) + 1;
    int row_min = cur[0];
    for (std::size_t j = 0; j < n; ++j) {
      cur[j + 1] = std::min({prev[j + 1] + 1, cur[j] + 1,
                             prev[j] + (a[i] == b[j] ? 0 : 1)});
      row_min = std::min(row_min, cur[j + 1]);
    }
    if (row_min > max_diffs) return false;
    prev.swap(cur);
  }
  return prev[n] <= max_diffs;
}

namespace {

// Sellers scan: distance between the pattern and the best window of `text`
// ending at each position. Returns, per end position j, whether that distance
// is <= max_diffs. Ukkonen cutoff: rows past the last active one are clamped
// to max_diffs + 1, which cannot change any <= max_diffs decision.
std::vector<char> feasible_window_ends(std::u32string_view text,
                                       std::u32string_view pat, int max_diffs) {
  const std::size_t m = pat.size(), n = text.size();
  const int inf = max_diffs + 1;
  std::vector<int> prev(m + 1), cur(m + 1, inf);
  std::vector<char> feasible(n + 1, 0);
  for (std::size_t i = 0; i <= m; ++i) prev[i] = static_cast<int>(i);
  feasible[0] = m <= static_cast<std::size_t>(max_diffs);
  std::size_t last = std::min(m, static_cast<std::size_t>(max_diffs));
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t limit = std::min(m, last + 1);
    cur[0] = 0;
    for (std::size_t i = 1; i <= limit; ++i) {
      int v = std::min({prev[i] + 1, cur[i - 1] + 1,
                        prev[i - 1] + (pat[i - 1] == text[j - 1] ? 0 : 1)});
      cur[i] = std::min(v, inf);
    }
    if (limit < m) cur[limit + 1] = inf;  // only row limit+1 is read next column
    last = limit;
    while (last > 0 && cur[last] > max_diffs) --last;
    feasible[j] = limit == m && cur[m] <= max_diffs;
    prev.swap(cur);
  }
  return feasible;
}

}  // namespace

std::optional<AnchorMatch> find_anchor(std::u32string_view haystack,
                                       std::u32string_view needle, int max_diffs) {
  if (needle.empty()) return std::nullopt;
  if (max_diffs <= 0) {
    std::size_t pos = haystack.find(needle);
    if (pos == std::u32string_view::npos) return std::nullopt;
    return AnchorMatch{pos, pos + needle.size(), 0};
  }

  // Leftmost feasible start = n - (rightmost feasible end of the reversed scan).
  std::u32string rev_hay(haystack.rbegin(), haystack.rend());
  std::u32string rev_needle(needle.rbegin(), needle.rend());
  auto feasible = feasible_window_ends(rev_hay, rev_needle, max_diffs);
  std::size_t best_rev_end = 0;
  bool found = false;
  for (std::size_t j = feasible.size(); j-- > 0;) {
    if (feasible[j]) {
      best_rev_end = j;
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;
  const std::size_t start = haystack.size() - best_rev_end;

  // Smallest end for that start, by a prefix-anchored DP over the window.
  const std::size_t m = needle.size();
  const std::size_t span = std::min(haystack.size() - start,
                                    m + static_cast<std::size_t>(max_diffs));
  std::u32string_view window = haystack.substr(start, span);
  std::vector<int> prev(span + 1), cur(span + 1);
  for (std::size_t j = 0; j <= span; ++j) prev[j] = static_cast<int>(j);
  std::vector<std::vector<int>> rows;
  rows.push_back(prev);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= span; ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (needle[i - 1] == window[j - 1] ? 0 : 1)});
    }
    prev.swap(cur);
    rows.push_back(prev);
  }
  for (std::size_t j = 0; j <= span; ++j) {
    if (rows[m][j] <= max_diffs) {
      return AnchorMatch{start, start + j, rows[m][j]};
    }
  }
  return std::nullopt;  // unreachable if the reverse scan was sound
}

std::optional<AnchorMatch> find_anchor(const NormalizedText& haystack,
                                       std::string_view anchor, int max_diffs) {
  NormalizedText needle = normalize(anchor);
  if (needle.text.empty()) return std::nullopt;
  return find_anchor(std::u32string_view(haystack.text),
                     std::u32string_view(needle.text), max_diffs);
}

}  // namespace ocrcheck::textnorm
