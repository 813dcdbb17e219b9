#include "ocrcheck/mathcmp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>

#include "ocrcheck/textnorm.hpp"

namespace ocrcheck::mathcmp {

namespace {

using Kind = MathNode::Kind;

const std::map<std::string, char32_t, std::less<>>& macro_glyphs() {
  static const std::map<std::string, char32_t, std::less<>> table = {
      {"alpha", 0x03B1},  {"beta", 0x03B2},   {"gamma", 0x03B3},
      {"delta", 0x03B4},  {"epsilon", 0x03B5}, {"zeta", 0x03B6},
      {"eta", 0x03B7},    {"theta", 0x03B8},  {"iota", 0x03B9},
      {"kappa", 0x03BA},  {"lambda", 0x03BB}, {"mu", 0x03BC},
      {"nu", 0x03BD},     {"xi", 0x03BE},     {"omicron", 0x03BF},
      {"pi", 0x03C0},     {"rho", 0x03C1},    {"sigma", 0x03C3},
      {"tau", 0x03C4},    {"upsilon", 0x03C5}, {"phi", 0x03C6},
      {"chi", 0x03C7},    {"psi", 0x03C8},    {"omega", 0x03C9},
      {"Gamma", 0x0393},  {"Delta", 0x0394},  {"Theta", 0x0398},
      {"Lambda", 0x039B}, {"Xi", 0x039E},     {"Pi", 0x03A0},
      {"Sigma", 0x03A3},  {"Upsilon", 0x03A5}, {"Phi", 0x03A6},
      {"Psi", 0x03A8},    {"Omega", 0x03A9},
      {"sum", 0x2211},    {"int", 0x222B},    {"prod", 0x220F},
      {"infty", 0x221E},  {"pm", 0x00B1},     {"times", 0x00D7},
      {"cdot", 0x22C5},   {"leq", 0x2264},    {"geq", 0x2265},
      {"neq", 0x2260},    {"to", 0x2192},     {"partial", 0x2202},
      {"nabla", 0x2207},
  };
  return table;
}

struct Token {
  enum class Type { Command, LBrace, RBrace, Caret, Underscore, Char, End };
  Type type = Type::End;
  std::string command;  // without backslash
  char32_t ch = 0;
};

class Lexer {
 public:
  explicit Lexer(std::u32string text) : text_(std::move(text)) {}

  Token next() {
    while (pos_ < text_.size() && textnorm::is_space(text_[pos_])) ++pos_;
    if (pos_ >= text_.size()) return {Token::Type::End, "", 0};
    char32_t c = text_[pos_++];
    switch (c) {
      case U'{': return {Token::Type::LBrace, "", 0};
      case U'}': return {Token::Type::RBrace, "", 0};
      case U'^': return {Token::Type::Caret, "", 0};
      case U'_': return {Token::Type::Underscore, "", 0};
      case U'\\': {
        if (pos_ >= text_.size()) {
          throw MathParseError("trailing backslash", false);
        }
        char32_t first = text_[pos_];
        if ((first >= U'a' && first <= U'z') || (first >= U'A' && first <= U'Z')) {
          std::string name;
          while (pos_ < text_.size() &&
                 ((text_[pos_] >= U'a' && text_[pos_] <= U'z') ||
                  (text_[pos_] >= U'A' && text_[pos_] <= U'Z'))) {
            name.push_back(static_cast<char>(text_[pos_++]));
          }
          return {Token::Type::Command, std::move(name), 0};
        }
        ++pos_;
        return {Token::Type::Command, std::string(1, static_cast<char>(first)), 0};
      }
      default:
        return {Token::Type::Char, "", c};
    }
  }

  // Raw continuation for \text{...}: the '{' was already lexed as a token,
  // so read literal characters up to the matching '}'.
  std::u32string raw_until_close_brace() {
    std::u32string out;
    int depth = 1;
    while (pos_ < text_.size()) {
      char32_t c = text_[pos_++];
      if (c == U'{') ++depth;
      if (c == U'}' && --depth == 0) return out;
      out.push_back(c);
    }
    throw MathParseError("unbalanced braces in \\text", false);
  }

 private:
  std::u32string text_;
  std::size_t pos_ = 0;
};

MathNode symbol(char32_t glyph) {
  MathNode node;
  node.kind = Kind::Symbol;
  node.glyph = glyph;
  return node;
}

MathNode space(double width) {
  MathNode node;
  node.kind = Kind::Space;
  node.space_width = width;
  return node;
}

MathNode row(std::vector<MathNode> children) {
  if (children.size() == 1) return std::move(children.front());
  MathNode node;
  node.kind = Kind::Row;
  node.children = std::move(children);
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(textnorm::decode_utf8(src)) {
    advance();
  }

  MathNode parse() {
    MathNode result = parse_sequence(/*inside_group=*/false, /*inside_delim=*/false);
    if (tok_.type != Token::Type::End) {
      throw MathParseError("unexpected closing brace", false);
    }
    return result;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  bool at_sequence_end(bool inside_group, bool inside_delim) const {
    if (tok_.type == Token::Type::End) return true;
    if (tok_.type == Token::Type::RBrace) return inside_group;
    if (inside_delim && tok_.type == Token::Type::Command && tok_.command == "right")
      return true;
    return false;
  }

  MathNode parse_sequence(bool inside_group, bool inside_delim) {
    std::vector<MathNode> items;
    while (!at_sequence_end(inside_group, inside_delim)) {
      if (tok_.type == Token::Type::RBrace) {
        throw MathParseError("unexpected closing brace", false);
      }
      if (tok_.type == Token::Type::Caret || tok_.type == Token::Type::Underscore) {
        bool is_sup = tok_.type == Token::Type::Caret;
        if (items.empty() || items.back().kind == Kind::Space) {
          throw MathParseError(is_sup ? "superscript without base"
                                      : "subscript without base", false);
        }
        advance();
        MathNode script = parse_script_arg(is_sup);
        attach_script(items.back(), std::move(script), is_sup);
        continue;
      }
      items.push_back(parse_atom());
    }
    return row(std::move(items));
  }

  MathNode parse_script_arg(bool is_sup) {
    if (tok_.type == Token::Type::End || tok_.type == Token::Type::RBrace ||
        tok_.type == Token::Type::Caret || tok_.type == Token::Type::Underscore) {
      throw MathParseError(is_sup ? "dangling superscript" : "dangling subscript", false);
    }
    return parse_atom();
  }

  void attach_script(MathNode& base, MathNode script, bool is_sup) {
    if (base.kind == Kind::Sup || base.kind == Kind::SubSup) {
      if (is_sup) throw MathParseError("double superscript", false);
    }
    if (base.kind == Kind::Sub || base.kind == Kind::SubSup) {
      if (!is_sup) throw MathParseError("double subscript", false);
    }
    if (base.kind == Kind::Sup && !is_sup) {
      // x^a_b -> SubSup(base, sub, sup)
      MathNode combined;
      combined.kind = Kind::SubSup;
      combined.children.reserve(3);
      combined.children.push_back(std::move(base.children[0]));
      combined.children.push_back(std::move(script));
      combined.children.push_back(std::move(base.children[1]));
      base = std::move(combined);
      return;
    }
    if (base.kind == Kind::Sub && is_sup) {
      MathNode combined;
      combined.kind = Kind::SubSup;
      combined.children.reserve(3);
      combined.children.push_back(std::move(base.children[0]));
      combined.children.push_back(std::move(base.children[1]));
      combined.children.push_back(std::move(script));
      base = std::move(combined);
      return;
    }
    MathNode wrapped;
    wrapped.kind = is_sup ? Kind::Sup : Kind::Sub;
    wrapped.children.reserve(2);
    wrapped.children.push_back(std::move(base));
    wrapped.children.push_back(std::move(script));
    base = std::move(wrapped);
  }

  MathNode parse_group() {
    if (tok_.type != Token::Type::LBrace) {
      throw MathParseError("expected '{'", false);
    }
    advance();
    MathNode inner = parse_sequence(/*inside_group=*/true, /*inside_delim=*/false);
    if (tok_.type != Token::Type::RBrace) {
      throw MathParseError("unbalanced braces", false);
    }
    advance();
    // {x^2}^a is legal TeX: the brace boundary shields the inner script, so
    // a scripted group stays wrapped.
    if (inner.kind == Kind::Sup || inner.kind == Kind::Sub || inner.kind == Kind::SubSup) {
      MathNode wrapper;
      wrapper.kind = Kind::Row;
      wrapper.children.push_back(std::move(inner));
      return wrapper;
    }
    return inner;
  }

  // Argument position: a group or a single atom.
  MathNode parse_arg(const char* what) {
    if (tok_.type == Token::Type::LBrace) return parse_group();
    if (tok_.type == Token::Type::End || tok_.type == Token::Type::RBrace) {
      throw MathParseError(std::string("missing argument for ") + what, false);
    }
    return parse_atom();
  }

  char32_t parse_delimiter(bool left) {
    if (tok_.type == Token::Type::Char) {
      char32_t c = tok_.ch;
      advance();
      return c;
    }
    if (tok_.type == Token::Type::Command) {
      std::string name = tok_.command;
      advance();
      if (name == "{") return U'{';
      if (name == "}") return U'}';
      if (name == "|") return U'‖';
      if (name == "langle") return U'⟨';
      if (name == "rangle") return U'⟩';
      if (name == "lbrace") return U'{';
      if (name == "rbrace") return U'}';
      throw MathParseError("unsupported delimiter \\" + name, true);
    }
    throw MathParseError(left ? "missing delimiter after \\left"
                              : "missing delimiter after \\right", false);
  }

  MathNode parse_atom() {
    switch (tok_.type) {
      case Token::Type::LBrace:
        return parse_group();
      case Token::Type::Char: {
        char32_t c = tok_.ch;
        advance();
        return symbol(c);
      }
      case Token::Type::Command:
        return parse_command();
      default:
        throw MathParseError("unexpected token", false);
    }
  }

  MathNode parse_command() {
    std::string name = tok_.command;
    advance();

    if (name == "frac" || name == "dfrac" || name == "tfrac") {
      MathNode node;
      node.kind = Kind::Frac;
      node.children.reserve(2);
      node.children.push_back(parse_arg("\\frac"));
      node.children.push_back(parse_arg("\\frac"));
      return node;
    }
    if (name == "sqrt") {
      MathNode node;
      node.kind = Kind::Sqrt;
      std::optional<MathNode> index;
      if (tok_.type == Token::Type::Char && tok_.ch == U'[') {
        advance();
        std::vector<MathNode> items;
        while (!(tok_.type == Token::Type::Char && tok_.ch == U']')) {
          if (tok_.type == Token::Type::End) {
            throw MathParseError("unterminated \\sqrt index", false);
          }
          items.push_back(parse_atom());
        }
        advance();
        index = row(std::move(items));
      }
      node.children.push_back(parse_arg("\\sqrt"));
      if (index) node.children.push_back(std::move(*index));
      return node;
    }
    if (name == "left") {
      char32_t open = tok_.type == Token::Type::Char && tok_.ch == U'.'
                          ? (advance(), static_cast<char32_t>(0))
                          : parse_delimiter(true);
      MathNode body = parse_sequence(/*inside_group=*/false, /*inside_delim=*/true);
      if (!(tok_.type == Token::Type::Command && tok_.command == "right")) {
        throw MathParseError("unmatched \\left", false);
      }
      advance();
      char32_t close = tok_.type == Token::Type::Char && tok_.ch == U'.'
                           ? (advance(), static_cast<char32_t>(0))
                           : parse_delimiter(false);
      MathNode node;
      node.kind = Kind::Delimited;
      node.left_glyph = open;
      node.right_glyph = close;
      node.children.push_back(std::move(body));
      return node;
    }
    if (name == "right") {
      throw MathParseError("\\right without \\left", false);
    }
    if (name == "text") {
      if (tok_.type != Token::Type::LBrace) {
        throw MathParseError("\\text requires a braced argument", false);
      }
      std::u32string raw = lexer_.raw_until_close_brace();
      advance();  // past the consumed '}'
      std::vector<MathNode> items;
      for (char32_t c : raw) {
        if (textnorm::is_space(c)) {
          items.push_back(space(0.5));
        } else {
          items.push_back(symbol(c));
        }
      }
      return row(std::move(items));
    }
    if (name == "mathbf" || name == "mathrm" || name == "mathit") {
      return parse_arg(("\\" + name).c_str());
    }
    if (name == ",") return space(0.3);
    if (name == ";") return space(0.4);
    if (name == "quad") return space(1.0);
    if (name == " ") return space(0.5);
    if (name == "{") return symbol(U'{');
    if (name == "}") return symbol(U'}');
    if (name == "|") return symbol(U'‖');
    if (name == "\\") throw MathParseError("line breaks are out of subset", true);

    auto it = macro_glyphs().find(name);
    if (it != macro_glyphs().end()) return symbol(it->second);
    throw MathParseError("unknown macro \\" + name, true);
  }

  Lexer lexer_;
  Token tok_;
};

}  // namespace

MathNode parse_latex(std::string_view src) {
  Parser parser(src);
  return parser.parse();
}

namespace {

double glyph_advance(char32_t glyph) {
  switch (glyph) {
    case U'.': case U',': case U'\'': case U'|': case U'!':
    case U':': case U';': case U'i': case U'l':
      return 0.5;
    default:
      return 1.0;
  }
}

void walk(const MathNode& node, double& x, double y, double scale,
          std::vector<GlyphBox>& out);

double measure(const MathNode& node, double scale) {
  double x = 0.0;
  std::vector<GlyphBox> scratch;
  walk(node, x, 0.0, scale, scratch);
  return x;
}

void emit(char32_t glyph, double& x, double y, double scale, std::vector<GlyphBox>& out) {
  out.push_back(GlyphBox{glyph, x, y, scale});
  x += glyph_advance(glyph) * scale;
}

void walk(const MathNode& node, double& x, double y, double scale,
          std::vector<GlyphBox>& out) {
  switch (node.kind) {
    case Kind::Symbol:
      emit(node.glyph, x, y, scale, out);
      return;
    case Kind::Space:
      x += node.space_width * scale;
      return;
    case Kind::Row:
      for (const auto& child : node.children) walk(child, x, y, scale, out);
      return;
    case Kind::Frac: {
      const MathNode& num = node.children[0];
      const MathNode& den = node.children[1];
      double wn = measure(num, scale);
      double wd = measure(den, scale);
      double w = std::max(wn, wd);
      double nx = x + (w - wn) / 2.0;
      double dx = x + (w - wd) / 2.0;
      walk(num, nx, y + kFracOffset * scale, scale, out);
      walk(den, dx, y - kFracOffset * scale, scale, out);
      x += w;
      return;
    }
    case Kind::Sqrt: {
      if (node.children.size() > 1) {
        double ix = x;
        walk(node.children[1], ix, y + kSqrtIndexOffset * scale,
             kSqrtIndexScale * scale, out);
        x = ix;
      }
      emit(U'√', x, y, scale, out);
      walk(node.children[0], x, y, scale, out);
      return;
    }
    case Kind::Sup: {
      walk(node.children[0], x, y, scale, out);
      walk(node.children[1], x, y + kSupOffset * scale, kScriptScale * scale, out);
      return;
    }
    case Kind::Sub: {
      walk(node.children[0], x, y, scale, out);
      walk(node.children[1], x, y + kSubOffset * scale, kScriptScale * scale, out);
      return;
    }
    case Kind::SubSup: {
      walk(node.children[0], x, y, scale, out);
      double sub_x = x, sup_x = x;
      walk(node.children[1], sub_x, y + kSubOffset * scale, kScriptScale * scale, out);
      walk(node.children[2], sup_x, y + kSupOffset * scale, kScriptScale * scale, out);
      x = std::max(sub_x, sup_x);
      return;
    }
    case Kind::Delimited: {
      if (node.left_glyph) emit(node.left_glyph, x, y, scale, out);
      walk(node.children[0], x, y, scale, out);
      if (node.right_glyph) emit(node.right_glyph, x, y, scale, out);
      return;
    }
  }
}

}  // namespace

std::vector<GlyphBox> layout(const MathNode& ast) {
  std::vector<GlyphBox> boxes;
  double x = 0.0;
  walk(ast, x, 0.0, 1.0, boxes);
  if (boxes.empty()) return boxes;
  double min_x = boxes[0].x, max_x = boxes[0].x;
  for (const auto& b : boxes) {
    min_x = std::min(min_x, b.x);
    max_x = std::max(max_x, b.x);
  }
  double span = max_x - min_x;
  for (auto& b : boxes) {
    b.x = span > 0.0 ? (b.x - min_x) / span : 0.0;
  }
  std::sort(boxes.begin(), boxes.end(), [](const GlyphBox& a, const GlyphBox& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.glyph < b.glyph;
  });
  return boxes;
}

bool boxes_equivalent(const std::vector<GlyphBox>& a, const std::vector<GlyphBox>& b,
                      double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].glyph != b[i].glyph) return false;
  }
  auto tsign = [tol](double d) { return std::abs(d) < tol ? 0 : (d > 0 ? 1 : -1); };
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (tsign(a[i].x - a[j].x) != tsign(b[i].x - b[j].x)) return false;
      if (tsign(a[i].y - a[j].y) != tsign(b[i].y - b[j].y)) return false;
    }
  }
  return true;
}

std::vector<std::string> extract_math_blocks(std::string_view body) {
  std::vector<std::string> blocks;
  std::size_t i = 0;
  auto take_until = [&](std::string_view close) -> std::optional<std::string> {
    std::size_t end = body.find(close, i);
    if (end == std::string_view::npos) return std::nullopt;
    std::string content(body.substr(i, end - i));
    i = end + close.size();
    return content;
  };
  while (i < body.size()) {
    char c = body[i];
    if (c == '\\' && i + 1 < body.size()) {
      char d = body[i + 1];
      if (d == '(') {
        i += 2;
        if (auto content = take_until("\\)")) blocks.push_back(std::move(*content));
        continue;
      }
      if (d == '[') {
        i += 2;
        if (auto content = take_until("\\]")) blocks.push_back(std::move(*content));
        continue;
      }
      if (d == '$') {  // escaped dollar is literal text
        i += 2;
        continue;
      }
      i += 2;
      continue;
    }
    if (c == '$') {
      if (i + 1 < body.size() && body[i + 1] == '$') {
        i += 2;
        if (auto content = take_until("$$")) blocks.push_back(std::move(*content));
        continue;
      }
      ++i;
      std::size_t end = body.find('$', i);
      if (end == std::string_view::npos) break;
      if (end > i) blocks.emplace_back(body.substr(i, end - i));
      i = end + 1;
      continue;
    }
    ++i;
  }
  return blocks;
}

std::vector<std::string> fallback_tokens(std::string_view src) {
  std::vector<std::string> tokens;
  std::u32string text = textnorm::decode_utf8(src);
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t c = text[i];
    if (textnorm::is_space(c) || c == U'{' || c == U'}') {
      ++i;
      continue;
    }
    if (c == U'\\') {
      ++i;
      std::string name = "\\";
      bool alpha_head = i < text.size() && text[i] < 128 &&
                        std::isalpha(static_cast<int>(text[i]));
      if (alpha_head) {
        while (i < text.size() && text[i] < 128 &&
               std::isalpha(static_cast<int>(text[i]))) {
          name.push_back(static_cast<char>(text[i++]));
        }
      } else if (i < text.size()) {
        name += textnorm::encode_utf8(std::u32string(1, text[i]));
        ++i;
      }
      if (name == "\\dfrac" || name == "\\tfrac") name = "\\frac";
      if (name == "\\," || name == "\\;" || name == "\\quad" || name == "\\ ") continue;
      tokens.push_back(std::move(name));
      continue;
    }
    tokens.push_back(textnorm::encode_utf8(std::u32string(1, c)));
    ++i;
  }
  return tokens;
}

core::TestOutcome math_equivalent(const std::string& reference,
                                  const std::vector<std::string>& candidate_blocks,
                                  double tol) {
  core::TestOutcome out;

  std::optional<std::vector<GlyphBox>> ref_boxes;
  try {
    ref_boxes = layout(parse_latex(reference));
  } catch (const MathParseError& e) {
    if (!e.out_of_subset()) {
      out.detail = std::string("reference parse error: ") + e.what();
      return out;
    }
  }

  if (candidate_blocks.empty()) {
    out.detail = "no math blocks found";
    return out;
  }

  if (ref_boxes) {
    for (const auto& block : candidate_blocks) {
      try {
        if (boxes_equivalent(*ref_boxes, layout(parse_latex(block)), tol)) {
          out.passed = true;
          return out;
        }
      } catch (const MathParseError&) {
        // unparseable candidate block simply does not match
      }
    }
  } else {
    std::vector<std::string> want = fallback_tokens(reference);
    for (const auto& block : candidate_blocks) {
      if (fallback_tokens(block) == want) {
        out.passed = true;
        return out;
      }
    }
  }
  out.detail = "no equivalent math block among " +
               std::to_string(candidate_blocks.size()) + " candidate(s)";
  return out;
}

core::TestOutcome math_equivalent(const std::string& reference, std::string_view body,
                                  double tol) {
  return math_equivalent(reference, extract_math_blocks(body), tol);
}

}  // namespace ocrcheck::mathcmp
