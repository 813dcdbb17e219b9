#include "ocrcheck/unicode_script.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

namespace ocrcheck::uniscript {

namespace {

struct Range {
  char32_t lo;
  char32_t hi;  // inclusive
  Script script;
};

// Principal letter blocks of the major scripts plus the Common/Inherited
// ranges that matter for typeset documents. Sorted by lo.
constexpr Range kScriptRanges[] = {
    {0x0000, 0x0040, Script::Common},
    {0x0041, 0x005A, Script::Latin},
    {0x005B, 0x0060, Script::Common},
    {0x0061, 0x007A, Script::Latin},
    {0x007B, 0x00A9, Script::Common},
    {0x00AA, 0x00AA, Script::Latin},
    {0x00AB, 0x00B9, Script::Common},
    {0x00BA, 0x00BA, Script::Latin},
    {0x00BB, 0x00BF, Script::Common},
    {0x00C0, 0x00D6, Script::Latin},
    {0x00D7, 0x00D7, Script::Common},
    {0x00D8, 0x00F6, Script::Latin},
    {0x00F7, 0x00F7, Script::Common},
    {0x00F8, 0x02B8, Script::Latin},
    {0x02B9, 0x02DF, Script::Common},
    {0x02E0, 0x02E4, Script::Latin},
    {0x02E5, 0x02FF, Script::Common},
    {0x0300, 0x036F, Script::Inherited},
    {0x0370, 0x0373, Script::Greek},
    {0x0374, 0x0374, Script::Common},
    {0x0375, 0x0377, Script::Greek},
    {0x037A, 0x037D, Script::Greek},
    {0x037E, 0x037E, Script::Common},
    {0x037F, 0x037F, Script::Greek},
    {0x0384, 0x0384, Script::Greek},
    {0x0385, 0x0385, Script::Common},
    {0x0386, 0x0386, Script::Greek},
    {0x0387, 0x0387, Script::Common},
    {0x0388, 0x03E1, Script::Greek},
    {0x03E2, 0x03EF, Script::Common},  // Coptic, sidestepped
    {0x03F0, 0x03FF, Script::Greek},
    {0x0400, 0x0482, Script::Cyrillic},
    {0x0483, 0x0489, Script::Inherited},
    {0x048A, 0x052F, Script::Cyrillic},
    {0x0530, 0x058F, Script::Armenian},
    {0x0590, 0x05FF, Script::Hebrew},
    {0x0600, 0x060B, Script::Arabic},
    {0x060C, 0x060C, Script::Common},
    {0x060D, 0x061A, Script::Arabic},
    {0x061B, 0x061B, Script::Common},
    {0x061C, 0x061E, Script::Arabic},
    {0x061F, 0x061F, Script::Common},
    {0x0620, 0x063F, Script::Arabic},
    {0x0640, 0x0640, Script::Common},
    {0x0641, 0x064A, Script::Arabic},
    {0x064B, 0x0655, Script::Inherited},
    {0x0656, 0x06FF, Script::Arabic},
    {0x0700, 0x074F, Script::Syriac},
    {0x0750, 0x077F, Script::Arabic},
    {0x0780, 0x07BF, Script::Thaana},
    {0x08A0, 0x08FF, Script::Arabic},
    {0x0900, 0x0950, Script::Devanagari},
    {0x0951, 0x0954, Script::Inherited},
    {0x0955, 0x0963, Script::Devanagari},
    {0x0964, 0x0965, Script::Common},
    {0x0966, 0x097F, Script::Devanagari},
    {0x0980, 0x09FF, Script::Bengali},
    {0x0A00, 0x0A7F, Script::Gurmukhi},
    {0x0A80, 0x0AFF, Script::Gujarati},
    {0x0B00, 0x0B7F, Script::Oriya},
    {0x0B80, 0x0BFF, Script::Tamil},
    {0x0C00, 0x0C7F, Script::Telugu},
    {0x0C80, 0x0CFF, Script::Kannada},
    {0x0D00, 0x0D7F, Script::Malayalam},
    {0x0D80, 0x0DFF, Script::Sinhala},
    {0x0E00, 0x0E7F, Script::Thai},
    {0x0E80, 0x0EFF, Script::Lao},
    {0x0F00, 0x0FFF, Script::Tibetan},
    {0x1000, 0x109F, Script::Myanmar},
    {0x10A0, 0x10FF, Script::Georgian},
    {0x1100, 0x11FF, Script::Hangul},
    {0x1200, 0x137F, Script::Ethiopic},
    {0x13A0, 0x13FF, Script::Cherokee},
    {0x1400, 0x167F, Script::CanadianAboriginal},
    {0x1680, 0x169F, Script::Ogham},
    {0x16A0, 0x16FF, Script::Runic},
    {0x1780, 0x17FF, Script::Khmer},
    {0x1800, 0x18AF, Script::Mongolian},
    {0x1AB0, 0x1AFF, Script::Inherited},
    {0x1C80, 0x1C8F, Script::Cyrillic},
    {0x1D00, 0x1D25, Script::Latin},
    {0x1D26, 0x1D2A, Script::Greek},
    {0x1D2B, 0x1D2B, Script::Cyrillic},
    {0x1D2C, 0x1D5C, Script::Latin},
    {0x1D5D, 0x1D61, Script::Greek},
    {0x1D62, 0x1D65, Script::Latin},
    {0x1D66, 0x1D6A, Script::Greek},
    {0x1D6B, 0x1DBF, Script::Latin},
    {0x1DC0, 0x1DFF, Script::Inherited},
    {0x1E00, 0x1EFF, Script::Latin},
    {0x1F00, 0x1FFF, Script::Greek},
    {0x2000, 0x2070, Script::Common},
    {0x2071, 0x2071, Script::Latin},
    {0x2074, 0x207E, Script::Common},
    {0x207F, 0x207F, Script::Latin},
    {0x2080, 0x208E, Script::Common},
    {0x2090, 0x209C, Script::Latin},
    {0x20A0, 0x20CF, Script::Common},
    {0x20D0, 0x20FF, Script::Inherited},
    {0x2100, 0x2129, Script::Common},
    {0x212A, 0x212B, Script::Latin},
    {0x212C, 0x2131, Script::Common},
    {0x2132, 0x2132, Script::Latin},
    {0x2133, 0x214D, Script::Common},
    {0x214E, 0x214E, Script::Latin},
    {0x214F, 0x215F, Script::Common},
    {0x2160, 0x2188, Script::Latin},  // Roman numerals
    {0x2190, 0x2BFF, Script::Common},  // arrows, math operators, symbols
    {0x2C60, 0x2C7F, Script::Latin},
    {0x2DE0, 0x2DFF, Script::Cyrillic},
    {0x2E00, 0x2E7F, Script::Common},
    {0x2E80, 0x2FDF, Script::Han},
    {0x3000, 0x303F, Script::Common},  // CJK punctuation (3005/3007/3021-9 are Han; coarse)
    {0x3040, 0x309F, Script::Hiragana},
    {0x30A0, 0x30FA, Script::Katakana},
    {0x30FB, 0x30FC, Script::Common},
    {0x30FD, 0x30FF, Script::Katakana},
    {0x3100, 0x312F, Script::Bopomofo},
    {0x3130, 0x318F, Script::Hangul},
    {0x31A0, 0x31BF, Script::Bopomofo},
    {0x31F0, 0x31FF, Script::Katakana},
    {0x3400, 0x4DBF, Script::Han},
    {0x4E00, 0x9FFF, Script::Han},
    {0xA000, 0xA4CF, Script::Yi},
    {0xA640, 0xA69F, Script::Cyrillic},
    {0xA720, 0xA7FF, Script::Latin},
    {0xA8E0, 0xA8FF, Script::Devanagari},
    {0xA960, 0xA97F, Script::Hangul},
    {0xAB30, 0xAB6F, Script::Latin},
    {0xAC00, 0xD7FF, Script::Hangul},
    {0xF900, 0xFAFF, Script::Han},
    {0xFB00, 0xFB06, Script::Latin},
    {0xFB50, 0xFDFF, Script::Arabic},
    {0xFE00, 0xFE0F, Script::Inherited},
    {0xFE10, 0xFE1F, Script::Common},
    {0xFE20, 0xFE2F, Script::Inherited},
    {0xFE30, 0xFE6F, Script::Common},
    {0xFE70, 0xFEFF, Script::Arabic},
    {0xFF00, 0xFF20, Script::Common},
    {0xFF21, 0xFF3A, Script::Latin},
    {0xFF3B, 0xFF40, Script::Common},
    {0xFF41, 0xFF5A, Script::Latin},
    {0xFF5B, 0xFF65, Script::Common},
    {0xFF66, 0xFF9F, Script::Katakana},
    {0xFFA0, 0xFFDC, Script::Hangul},
    {0x1D400, 0x1D7FF, Script::Common},  // mathematical alphanumerics
    {0x20000, 0x2EBEF, Script::Han},
    {0x2F800, 0x2FA1F, Script::Han},
};

// Non-letter code points inside otherwise-lettered script ranges: digits,
// dependent vowel signs / tone marks, and script-local punctuation.
constexpr std::pair<char32_t, char32_t> kNonLetter[] = {
    {0x055A, 0x055F},  // Armenian punctuation
    {0x0589, 0x058A},
    {0x0591, 0x05C7},  // Hebrew points
    {0x0600, 0x061F},  // Arabic signs and punctuation
    {0x064B, 0x0669},  // harakat + Arabic-Indic digits
    {0x066A, 0x066D},
    {0x06D4, 0x06D4},
    {0x06D6, 0x06ED},
    {0x06F0, 0x06F9},  // extended Arabic-Indic digits
    {0x0700, 0x070F},  // Syriac punctuation
    {0x0711, 0x0711},
    {0x0730, 0x074A},
    {0x07A6, 0x07B0},  // Thaana vowels
    {0x0900, 0x0903},  // Devanagari signs
    {0x093A, 0x094F},
    {0x0951, 0x0957},
    {0x0962, 0x0970},  // incl. danda and digits
    {0x0981, 0x0983},
    {0x09BC, 0x09CD},
    {0x09E2, 0x09EF},
    {0x0A01, 0x0A03},
    {0x0A3C, 0x0A4D},
    {0x0A66, 0x0A71},
    {0x0A81, 0x0A83},
    {0x0ABC, 0x0ACD},
    {0x0AE2, 0x0AF1},
    {0x0B01, 0x0B03},
    {0x0B3C, 0x0B57},
    {0x0B62, 0x0B70},
    {0x0B82, 0x0B82},
    {0x0BBE, 0x0BCD},
    {0x0BE6, 0x0BFA},
    {0x0C00, 0x0C04},
    {0x0C3E, 0x0C56},
    {0x0C62, 0x0C7F},
    {0x0C81, 0x0C83},
    {0x0CBC, 0x0CD6},
    {0x0CE2, 0x0CF0},
    {0x0D00, 0x0D03},
    {0x0D3B, 0x0D4D},
    {0x0D62, 0x0D79},
    {0x0D81, 0x0D83},
    {0x0DCA, 0x0DF4},
    {0x0E31, 0x0E31},  // Thai vowel/tone marks and digits
    {0x0E34, 0x0E3A},
    {0x0E47, 0x0E5B},
    {0x0EB1, 0x0EB1},
    {0x0EB4, 0x0EBC},
    {0x0EC8, 0x0ED9},
    {0x0F01, 0x0F3F},  // Tibetan signs and digits
    {0x0F71, 0x0F87},
    {0x1037, 0x104F},  // Myanmar signs, digits, punctuation (coarse)
    {0x10FB, 0x10FB},
    {0x1360, 0x137C},  // Ethiopic punctuation and numbers
    {0x166D, 0x166E},
    {0x169B, 0x169C},
    {0x16EB, 0x16ED},
    {0x17B4, 0x17D6},  // Khmer signs
    {0x17D8, 0x17E9},  // Khmer punctuation/digits
    {0x1800, 0x1819},  // Mongolian punctuation/digits
    {0x3099, 0x309C},  // kana voicing marks
    {0xFE70, 0xFE74},
};

bool in_non_letter(char32_t c) {
  auto it = std::upper_bound(
      std::begin(kNonLetter), std::end(kNonLetter), c,
      [](char32_t v, const std::pair<char32_t, char32_t>& r) { return v < r.first; });
  if (it == std::begin(kNonLetter)) return false;
  --it;
  return c >= it->first && c <= it->second;
}

constexpr std::array<std::string_view, static_cast<std::size_t>(Script::Count)>
    kScriptNames = {
        "Unknown",   "Common",    "Inherited", "Latin",     "Greek",
        "Cyrillic",  "Armenian",  "Hebrew",    "Arabic",    "Syriac",
        "Thaana",    "Devanagari", "Bengali",  "Gurmukhi",  "Gujarati",
        "Oriya",     "Tamil",     "Telugu",    "Kannada",   "Malayalam",
        "Sinhala",   "Thai",      "Lao",       "Tibetan",   "Myanmar",
        "Georgian",  "Hangul",    "Ethiopic",  "Cherokee",
        "Canadian_Aboriginal",    "Ogham",     "Runic",     "Khmer",
        "Mongolian", "Hiragana",  "Katakana",  "Bopomofo",  "Han",
        "Yi",
};

}  // namespace

Script script_of(char32_t c) {
  auto it = std::upper_bound(std::begin(kScriptRanges), std::end(kScriptRanges), c,
                             [](char32_t v, const Range& r) { return v < r.lo; });
  if (it == std::begin(kScriptRanges)) return Script::Unknown;
  --it;
  if (c >= it->lo && c <= it->hi) return it->script;
  return Script::Unknown;
}

bool is_alphabetic(char32_t c) {
  if (c < 0x80) {
    return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
  }
  Script s = script_of(c);
  if (s == Script::Unknown || s == Script::Common || s == Script::Inherited) return false;
  return !in_non_letter(c);
}

std::string_view script_name(Script s) {
  return kScriptNames[static_cast<std::size_t>(s)];
}

std::optional<Script> script_from_name(std::string_view name) {
  auto eq = [](std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(a[i])) !=
          std::tolower(static_cast<unsigned char>(b[i])))
        return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < kScriptNames.size(); ++i) {
    if (eq(name, kScriptNames[i])) return static_cast<Script>(i);
  }
  return std::nullopt;
}

}  // namespace ocrcheck::uniscript
