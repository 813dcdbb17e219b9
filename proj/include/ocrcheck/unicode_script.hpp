#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace ocrcheck::uniscript {

enum class Script : std::uint8_t {
  Unknown,
  Common,
  Inherited,
  Latin,
  Greek,
  Cyrillic,
  Armenian,
  Hebrew,
  Arabic,
  Syriac,
  Thaana,
  Devanagari,
  Bengali,
  Gurmukhi,
  Gujarati,
  Oriya,
  Tamil,
  Telugu,
  Kannada,
  Malayalam,
  Sinhala,
  Thai,
  Lao,
  Tibetan,
  Myanmar,
  Georgian,
  Hangul,
  Ethiopic,
  Cherokee,
  CanadianAboriginal,
  Ogham,
  Runic,
  Khmer,
  Mongolian,
  Hiragana,
  Katakana,
  Bopomofo,
  Han,
  Yi,
  Count,
};

Script script_of(char32_t c);

// Letters only: in-script digits, combining marks and punctuation are excluded,
// as are all Common/Inherited code points.
bool is_alphabetic(char32_t c);

std::string_view script_name(Script s);
std::optional<Script> script_from_name(std::string_view name);  // case-insensitive

}  // namespace ocrcheck::uniscript
