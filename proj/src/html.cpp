#include "ocrcheck/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "ocrcheck/textnorm.hpp"

namespace ocrcheck::html {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

constexpr std::array<std::string_view, 16> kVoidTags = {
    "area", "base", "br",     "col",  "embed",  "hr",    "img",   "input",
    "link", "meta", "param",  "source", "track", "wbr",  "!doctype", "!",
};

constexpr std::array<std::string_view, 23> kBlockTags = {
    "p",   "div",  "h1", "h2",     "h3",    "h4",     "h5",     "h6",
    "ul",  "ol",   "li", "table",  "tr",    "td",     "th",     "blockquote",
    "pre", "figure", "figcaption", "header", "footer", "section", "br",
};

struct NamedEntity {
  std::string_view name;
  std::string_view utf8;
};

constexpr NamedEntity kEntities[] = {
    {"amp", "&"},     {"lt", "<"},      {"gt", ">"},      {"quot", "\""},
    {"apos", "'"},    {"nbsp", " "}, {"shy", "­"}, {"mdash", "—"},
    {"ndash", "–"}, {"lsquo", "‘"}, {"rsquo", "’"},
    {"ldquo", "“"}, {"rdquo", "”"}, {"hellip", "…"},
    {"times", "×"}, {"divide", "÷"}, {"plusmn", "±"},
    {"deg", "°"}, {"copy", "©"}, {"reg", "®"},
    {"middot", "·"}, {"bull", "•"}, {"sect", "§"},
    {"para", "¶"}, {"laquo", "«"}, {"raquo", "»"},
    {"dagger", "†"}, {"Dagger", "‡"}, {"prime", "′"},
    {"Prime", "″"}, {"minus", "−"}, {"frac12", "½"},
    {"frac14", "¼"}, {"micro", "µ"}, {"alpha", "α"},
    {"beta", "β"}, {"gamma", "γ"}, {"pi", "π"},
};

// Elements implicitly closed when a sibling of the same family opens.
bool auto_closes(std::string_view open, std::string_view incoming) {
  if (open == "p" && is_block_tag(incoming) && incoming != "br") return true;
  if (open == "li" && incoming == "li") return true;
  if ((open == "td" || open == "th") &&
      (incoming == "td" || incoming == "th" || incoming == "tr")) return true;
  if (open == "tr" && incoming == "tr") return true;
  if (open == "option" && incoming == "option") return true;
  return false;
}

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  bool eof() const { return pos >= src.size(); }
  char peek(std::size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }

  void skip_until(std::string_view marker) {
    std::size_t p = src.find(marker, pos);
    pos = p == std::string_view::npos ? src.size() : p + marker.size();
  }

  // Parses a tag at '<'. Returns {name, is_close, self_closing, attrs}.
  struct Tag {
    std::string name;
    bool close = false;
    bool self_close = false;
    std::vector<std::pair<std::string, std::string>> attrs;
  };

  std::optional<Tag> parse_tag() {
    Tag tag;
    ++pos;  // '<'
    if (peek() == '/') {
      tag.close = true;
      ++pos;
    }
    std::size_t name_start = pos;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '!' || peek() == '-' || peek() == '_')) {
      ++pos;
    }
    if (pos == name_start) {  // stray '<'
      return std::nullopt;
    }
    tag.name = to_lower(src.substr(name_start, pos - name_start));
    // attributes
    while (!eof() && peek() != '>') {
      if (peek() == '/' && peek(1) == '>') {
        tag.self_close = true;
        pos += 2;
        return tag;
      }
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        ++pos;
        continue;
      }
      if (peek() == '/') {  // stray slash that is not part of '/>'
        ++pos;
        continue;
      }
      std::size_t attr_start = pos;
      while (!eof() && peek() != '=' && peek() != '>' && peek() != '/' &&
             !std::isspace(static_cast<unsigned char>(peek()))) {
        ++pos;
      }
      std::string attr_name = to_lower(src.substr(attr_start, pos - attr_start));
      std::string attr_value;
      while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
      if (peek() == '=') {
        ++pos;
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
        if (peek() == '"' || peek() == '\'') {
          char quote = peek();
          ++pos;
          std::size_t vstart = pos;
          while (!eof() && peek() != quote) ++pos;
          attr_value = decode_entities(src.substr(vstart, pos - vstart));
          if (!eof()) ++pos;
        } else {
          std::size_t vstart = pos;
          while (!eof() && peek() != '>' &&
                 !std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos;
          }
          attr_value = decode_entities(src.substr(vstart, pos - vstart));
        }
      }
      if (!attr_name.empty()) tag.attrs.emplace_back(std::move(attr_name), std::move(attr_value));
    }
    if (!eof()) ++pos;  // '>'
    return tag;
  }
};

}  // namespace

bool is_block_tag(std::string_view tag) {
  return std::find(kBlockTags.begin(), kBlockTags.end(), tag) != kBlockTags.end();
}

bool is_void_tag(std::string_view tag) {
  return std::find(kVoidTags.begin(), kVoidTags.end(), tag) != kVoidTags.end();
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back('&');
      ++i;
      continue;
    }
    std::string_view body = text.substr(i + 1, semi - i - 1);
    if (!body.empty() && body[0] == '#') {
      char32_t cp = 0;
      bool ok = body.size() > 1;
      if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
        for (std::size_t k = 2; k < body.size() && ok; ++k) {
          char c = body[k];
          int digit = c >= '0' && c <= '9'   ? c - '0'
                      : c >= 'a' && c <= 'f' ? c - 'a' + 10
                      : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                             : -1;
          if (digit < 0) ok = false;
          else cp = cp * 16 + static_cast<char32_t>(digit);
        }
      } else {
        for (std::size_t k = 1; k < body.size() && ok; ++k) {
          char c = body[k];
          if (c < '0' || c > '9') ok = false;
          else cp = cp * 10 + static_cast<char32_t>(c - '0');
        }
      }
      if (ok && cp > 0 && cp <= 0x10FFFF) {
        out += textnorm::encode_utf8(std::u32string(1, cp));
        i = semi + 1;
        continue;
      }
    } else {
      const auto* hit = std::find_if(std::begin(kEntities), std::end(kEntities),
                                     [&](const NamedEntity& e) { return body == e.name; });
      if (hit != std::end(kEntities)) {
        out += hit->utf8;
        i = semi + 1;
        continue;
      }
    }
    out.push_back('&');
    ++i;
  }
  return out;
}

Element parse_document(std::string_view source) {
  Element root;
  root.tag = "#root";
  std::vector<Element*> stack{&root};
  Parser p{source};

  auto append_text = [&](std::string_view raw) {
    if (raw.empty()) return;
    std::string decoded = decode_entities(raw);
    if (decoded.empty()) return;
    stack.back()->children.emplace_back(std::move(decoded));
  };

  while (!p.eof()) {
    std::size_t lt = source.find('<', p.pos);
    if (lt == std::string_view::npos) {
      append_text(source.substr(p.pos));
      break;
    }
    if (lt > p.pos) append_text(source.substr(p.pos, lt - p.pos));
    p.pos = lt;
    if (source.compare(lt, 4, "<!--") == 0) {
      p.pos += 4;
      p.skip_until("-->");
      continue;
    }
    auto tag = p.parse_tag();
    if (!tag) {
      append_text("<");
      p.pos = lt + 1;
      continue;
    }
    if (!tag->name.empty() && tag->name[0] == '!') continue;  // doctype etc.
    if (tag->close) {
      // pop to the matching open element, if any
      for (std::size_t depth = stack.size(); depth > 1; --depth) {
        if (stack[depth - 1]->tag == tag->name) {
          stack.resize(depth - 1);
          break;
        }
      }
      continue;
    }
    if (tag->name == "script" || tag->name == "style") {
      p.skip_until("</" + tag->name);
      p.skip_until(">");
      continue;
    }
    while (stack.size() > 1 && auto_closes(stack.back()->tag, tag->name)) {
      stack.pop_back();
    }
    Element el;
    el.tag = tag->name;
    el.attrs = std::move(tag->attrs);
    stack.back()->children.emplace_back(std::move(el));
    if (!tag->self_close && !is_void_tag(tag->name)) {
      stack.push_back(&std::get<Element>(stack.back()->children.back()));
    }
  }
  return root;
}

std::optional<std::string_view> Element::attr(std::string_view name) const {
  for (const auto& [k, v] : attrs) {
    if (k == name) return std::string_view(v);
  }
  return std::nullopt;
}

bool Element::has_class(std::string_view token) const {
  auto cls = attr("class");
  if (!cls) return false;
  std::size_t i = 0;
  std::string_view s = *cls;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (s.substr(start, i - start) == token) return true;
  }
  return false;
}

namespace {

void collect_text(const Element& el, std::string& out) {
  if (is_block_tag(el.tag) && !out.empty() && out.back() != ' ') out.push_back(' ');
  for (const auto& child : el.children) {
    if (const auto* text = std::get_if<std::string>(&child)) {
      out += *text;
    } else {
      collect_text(std::get<Element>(child), out);
    }
  }
  if (is_block_tag(el.tag) && !out.empty() && out.back() != ' ') out.push_back(' ');
}

}  // namespace

std::string Element::text_content() const {
  std::string out;
  collect_text(*this, out);
  return out;
}

const Element* find_first(const Element& root, std::string_view tag) {
  if (root.tag == tag) return &root;
  for (const auto& child : root.children) {
    if (const auto* el = std::get_if<Element>(&child)) {
      if (const Element* found = find_first(*el, tag)) return found;
    }
  }
  return nullptr;
}

void find_all(const Element& root, std::string_view tag, std::vector<const Element*>& out) {
  if (root.tag == tag) out.push_back(&root);
  for (const auto& child : root.children) {
    if (const auto* el = std::get_if<Element>(&child)) {
      find_all(*el, tag, out);
    }
  }
}

void for_each_element(const Element& root, const std::function<void(const Element&)>& fn) {
  fn(root);
  for (const auto& child : root.children) {
    if (const auto* el = std::get_if<Element>(&child)) {
      for_each_element(*el, fn);
    }
  }
}

}  // namespace ocrcheck::html
