#include "doctest.h"
#include "ocrcheck/unicode_script.hpp"

using namespace ocrcheck::uniscript;

TEST_SUITE("unicode_script") {

TEST_CASE("script classification of representative code points") {
  CHECK(script_of(U'a') == Script::Latin);
  CHECK(script_of(U'Z') == Script::Latin);
  CHECK(script_of(0x00E9) == Script::Latin);   // é
  CHECK(script_of(0x03B1) == Script::Greek);   // α
  CHECK(script_of(0x042F) == Script::Cyrillic);  // Я
  CHECK(script_of(0x05D0) == Script::Hebrew);  // א
  CHECK(script_of(0x0627) == Script::Arabic);  // ا
  CHECK(script_of(0x0915) == Script::Devanagari);  // क
  CHECK(script_of(0x0E01) == Script::Thai);    // ก
  CHECK(script_of(0x4E2D) == Script::Han);     // 中
  CHECK(script_of(0x3042) == Script::Hiragana);  // あ
  CHECK(script_of(0x30A2) == Script::Katakana);  // ア
  CHECK(script_of(0xAC00) == Script::Hangul);  // 가
  CHECK(script_of(U'7') == Script::Common);
  CHECK(script_of(U',') == Script::Common);
  CHECK(script_of(U' ') == Script::Common);
  CHECK(script_of(0x0301) == Script::Inherited);  // combining acute
  CHECK(script_of(0x2212) == Script::Common);     // minus sign
}

TEST_CASE("alphabetic excludes digits, marks and punctuation") {
  CHECK(is_alphabetic(U'a'));
  CHECK(is_alphabetic(0x00E9));
  CHECK(is_alphabetic(0x03B1));
  CHECK(is_alphabetic(0x4E2D));
  CHECK(is_alphabetic(0x0915));
  CHECK_FALSE(is_alphabetic(U'7'));
  CHECK_FALSE(is_alphabetic(U'.'));
  CHECK_FALSE(is_alphabetic(0x0966));  // Devanagari digit zero
  CHECK_FALSE(is_alphabetic(0x0660));  // Arabic-Indic digit zero
  CHECK_FALSE(is_alphabetic(0x05B4));  // Hebrew point hiriq
  CHECK_FALSE(is_alphabetic(0x0301));  // combining mark
  CHECK_FALSE(is_alphabetic(0x3001));  // ideographic comma
}

TEST_CASE("script names round-trip case-insensitively") {
  CHECK(script_from_name("Latin") == Script::Latin);
  CHECK(script_from_name("latin") == Script::Latin);
  CHECK(script_from_name("CYRILLIC") == Script::Cyrillic);
  CHECK(script_from_name("Han") == Script::Han);
  CHECK_FALSE(script_from_name("Klingon").has_value());
  CHECK(script_name(Script::Greek) == "Greek");
  for (int s = 0; s < static_cast<int>(Script::Count); ++s) {
    auto script = static_cast<Script>(s);
    CHECK(script_from_name(script_name(script)) == script);
  }
}

}  // TEST_SUITE
