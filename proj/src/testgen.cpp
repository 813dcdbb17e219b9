#include "ocrcheck/testgen.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>

#include "ocrcheck/html.hpp"
#include "ocrcheck/tables.hpp"
#include "ocrcheck/textnorm.hpp"

namespace ocrcheck::testgen {

namespace {

constexpr char32_t kMathSentinel = 0xE000;  // marks inline math inside flow text

// Deterministic sampling helpers; std::shuffle and the distribution classes
// are implementation-defined, so draws go through the raw engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : gen_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

struct MathSource {
  std::string latex;
  bool display = false;
};

std::optional<MathSource> as_math_element(const html::Element& el) {
  bool marked = el.has_class("math") || el.has_class("katex");
  if (!marked) return std::nullopt;
  MathSource src;
  std::string text = el.text_content();
  std::string_view sv(text);
  while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front()))) sv.remove_prefix(1);
  while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.back()))) sv.remove_suffix(1);
  src.latex = std::string(sv);
  src.display = el.tag == "div" || el.has_class("display") || el.has_class("katex-display");
  return src;
}

bool skip_entirely(const html::Element& el) {
  return el.tag == "header" || el.tag == "footer" || el.tag == "head" ||
         el.tag == "script" || el.tag == "style" || el.tag == "nav" ||
         el.tag == "title";
}

// ---------------------------------------------------------------------------
// Markdown rendering
// ---------------------------------------------------------------------------

std::string pipe_table_markdown(const tables::TableGrid& grid) {
  auto escape = [](const std::u32string& cell) {
    std::string text = textnorm::encode_utf8(cell);
    std::string out;
    for (char c : text) {
      if (c == '|') out += "\\|";
      else out.push_back(c);
    }
    return out;
  };
  std::string out;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    out += "|";
    for (std::size_t c = 0; c < grid.cols; ++c) {
      out += " " + escape(grid.at(r, c)) + " |";
    }
    out += "\n";
    if (r == 0) {
      out += "|";
      for (std::size_t c = 0; c < grid.cols; ++c) out += " --- |";
      out += "\n";
    }
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

class MarkdownRenderer {
 public:
  std::string render(const html::Element& body) {
    walk_children(body);
    flush_paragraph();
    std::string out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) out += "\n\n";
      out += blocks_[i];
    }
    out += "\n";
    return out;
  }

 private:
  std::vector<std::string> blocks_;
  std::string paragraph_;

  void flush_paragraph() {
    std::string_view sv(paragraph_);
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front()))) sv.remove_prefix(1);
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.back()))) sv.remove_suffix(1);
    if (!sv.empty()) blocks_.emplace_back(sv);
    paragraph_.clear();
  }

  void append_inline(const std::string& text) { paragraph_ += text; }

  std::string inline_text(const html::Element& el) {
    std::string out;
    for (const auto& child : el.children) {
      if (const auto* text = std::get_if<std::string>(&child)) {
        out += *text;
        continue;
      }
      const auto& sub = std::get<html::Element>(child);
      if (skip_entirely(sub)) continue;
      if (auto math = as_math_element(sub)) {
        out += math->display ? "\\[" + math->latex + "\\]" : "\\(" + math->latex + "\\)";
        continue;
      }
      if (sub.tag == "b" || sub.tag == "strong") {
        out += "**" + inline_text(sub) + "**";
      } else if (sub.tag == "i" || sub.tag == "em") {
        out += "*" + inline_text(sub) + "*";
      } else if (sub.tag == "code") {
        out += "`" + inline_text(sub) + "`";
      } else if (sub.tag == "a") {
        std::string href(sub.attr("href").value_or(""));
        std::string text = inline_text(sub);
        out += href.empty() ? text : "[" + text + "](" + href + ")";
      } else if (sub.tag == "br") {
        out += "\n";
      } else if (sub.tag == "img") {
        // alt text is not part of the linearized page
      } else {
        out += inline_text(sub);
      }
    }
    return out;
  }

  void walk_children(const html::Element& el) {
    for (const auto& child : el.children) {
      if (const auto* text = std::get_if<std::string>(&child)) {
        append_inline(*text);
        continue;
      }
      const auto& sub = std::get<html::Element>(child);
      walk_element(sub);
    }
  }

  void walk_element(const html::Element& el) {
    if (skip_entirely(el)) return;
    if (auto math = as_math_element(el)) {
      if (math->display) {
        flush_paragraph();
        blocks_.push_back("\\[" + math->latex + "\\]");
      } else {
        append_inline("\\(" + math->latex + "\\)");
      }
      return;
    }
    if (el.tag == "table") {
      flush_paragraph();
      tables::TableGrid grid = tables::grid_from_element(el);
      if (grid.rows > 0) blocks_.push_back(pipe_table_markdown(grid));
      return;
    }
    if (el.tag[0] == 'h' && el.tag.size() == 2 && el.tag[1] >= '1' && el.tag[1] <= '6') {
      flush_paragraph();
      int level = el.tag[1] - '0';
      blocks_.push_back(std::string(static_cast<std::size_t>(level), '#') + " " +
                        inline_text(el));
      return;
    }
    if (el.tag == "p") {
      flush_paragraph();
      append_inline(inline_text(el));
      flush_paragraph();
      return;
    }
    if (el.tag == "ul" || el.tag == "ol") {
      flush_paragraph();
      std::string block;
      int ordinal = 1;
      for (const auto& child : el.children) {
        const auto* li = std::get_if<html::Element>(&child);
        if (!li || li->tag != "li") continue;
        if (!block.empty()) block += "\n";
        if (el.tag == "ol") {
          block += std::to_string(ordinal++) + ". " + inline_text(*li);
        } else {
          block += "- " + inline_text(*li);
        }
      }
      if (!block.empty()) blocks_.push_back(block);
      return;
    }
    if (el.tag == "blockquote") {
      flush_paragraph();
      blocks_.push_back("> " + inline_text(el));
      return;
    }
    if (el.tag == "figure") {
      flush_paragraph();
      for (const auto& child : el.children) {
        const auto* sub = std::get_if<html::Element>(&child);
        if (sub && sub->tag == "figcaption") {
          blocks_.push_back(inline_text(*sub));
        }
      }
      return;
    }
    if (el.tag == "figcaption") {
      flush_paragraph();
      blocks_.push_back(inline_text(el));
      return;
    }
    if (el.tag == "pre") {
      flush_paragraph();
      blocks_.push_back("```\n" + el.text_content() + "\n```");
      return;
    }
    if (el.tag == "br") {
      append_inline("\n");
      return;
    }
    if (html::is_block_tag(el.tag) || el.tag == "body" || el.tag == "html" ||
        el.tag == "main" || el.tag == "article" || el.tag == "section" ||
        el.tag == "#root") {
      flush_paragraph();
      walk_children(el);
      flush_paragraph();
      return;
    }
    // inline element at block level
    append_inline(inline_text(el));
  }
};

// ---------------------------------------------------------------------------
// Flow extraction for anchor sampling
// ---------------------------------------------------------------------------

struct Flow {
  std::vector<std::string> block_texts;      // sentinel-marked plain text
  std::vector<std::string> adjacent_captions;
};

class FlowCollector {
 public:
  std::vector<Flow> collect(const html::Element& body) {
    walk(body);
    close_flow();
    return std::move(flows_);
  }

 private:
  std::vector<Flow> flows_;
  Flow current_;
  bool open_ = false;
  std::vector<std::string> pending_captions_;

  void open_flow() {
    if (open_) return;
    current_ = Flow{};
    current_.adjacent_captions = pending_captions_;
    pending_captions_.clear();
    open_ = true;
  }

  void close_flow() {
    if (!open_) return;
    flows_.push_back(std::move(current_));
    open_ = false;
  }

  void text_block(std::string text) {
    open_flow();
    current_.block_texts.push_back(std::move(text));
  }

  void caption(const std::string& text) {
    if (open_) {
      current_.adjacent_captions.push_back(text);
      close_flow();
    }
    pending_captions_.push_back(text);
  }

  // plain text of an element with inline math replaced by a sentinel
  std::string flow_text(const html::Element& el) {
    std::string out;
    for (const auto& child : el.children) {
      if (const auto* text = std::get_if<std::string>(&child)) {
        out += *text;
        continue;
      }
      const auto& sub = std::get<html::Element>(child);
      if (skip_entirely(sub)) continue;
      if (as_math_element(sub)) {
        out += textnorm::encode_utf8(std::u32string(1, kMathSentinel));
        continue;
      }
      if (sub.tag == "br") {
        out += " ";
        continue;
      }
      out += flow_text(sub);
    }
    return out;
  }

  void walk(const html::Element& el) {
    for (const auto& child : el.children) {
      const auto* sub = std::get_if<html::Element>(&child);
      if (!sub) continue;
      if (skip_entirely(*sub)) {
        close_flow();
        continue;
      }
      if (as_math_element(*sub)) {  // display math between blocks breaks the flow
        close_flow();
        continue;
      }
      if (sub->tag == "table") {
        close_flow();
        continue;
      }
      if (sub->tag == "figure") {
        std::string cap;
        for (const auto& fc : sub->children) {
          const auto* fce = std::get_if<html::Element>(&fc);
          if (fce && fce->tag == "figcaption") cap = flow_text(*fce);
        }
        if (!cap.empty()) caption(cap);
        else close_flow();
        continue;
      }
      if (sub->tag == "figcaption") {
        caption(flow_text(*sub));
        continue;
      }
      if (sub->tag == "p" || sub->tag == "blockquote" ||
          (sub->tag.size() == 2 && sub->tag[0] == 'h' && sub->tag[1] >= '1' &&
           sub->tag[1] <= '6')) {
        text_block(flow_text(*sub));
        continue;
      }
      if (sub->tag == "li") {
        text_block(flow_text(*sub));
        continue;
      }
      if (sub->tag == "pre") {
        close_flow();
        continue;
      }
      // containers: recurse
      walk(*sub);
    }
  }
};

// Sentence segmentation: terminator (. ! ?) followed by whitespace and an
// uppercase or digit start.
std::vector<std::string> split_sentences(const std::string& block_text) {
  std::u32string text = textnorm::normalize(block_text).text;
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char32_t c = text[i];
    bool terminator = c == U'.' || c == U'!' || c == U'?';
    if (terminator && i + 2 < text.size() && text[i + 1] == U' ') {
      char32_t next = text[i + 2];
      bool sentence_start = (next >= U'A' && next <= U'Z') || (next >= U'0' && next <= U'9');
      if (sentence_start) {
        sentences.push_back(textnorm::encode_utf8(text.substr(start, i + 1 - start)));
        start = i + 2;
      }
    }
  }
  if (start < text.size()) {
    sentences.push_back(textnorm::encode_utf8(text.substr(start)));
  }
  return sentences;
}

std::size_t word_count(const std::u32string& normalized) {
  if (normalized.empty()) return 0;
  return static_cast<std::size_t>(std::count(normalized.begin(), normalized.end(), U' ')) + 1;
}

std::string first_words(const std::u32string& normalized, int max_words) {
  std::size_t spaces = 0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (normalized[i] == U' ' && ++spaces == static_cast<std::size_t>(max_words)) {
      return textnorm::encode_utf8(normalized.substr(0, i));
    }
  }
  return textnorm::encode_utf8(normalized);
}

std::size_t count_occurrences(const std::u32string& haystack, const std::u32string& needle,
                              std::size_t cap = 2) {
  if (needle.empty()) return 0;
  std::size_t count = 0, pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::u32string::npos) {
    if (++count >= cap) return count;
    ++pos;
  }
  return count;
}

bool has_markdown_specials(const std::string& s) {
  return s.find_first_of("*_`[]|$\\<>#") != std::string::npos;
}

bool has_sentinel(const std::string& s) {
  std::u32string u = textnorm::decode_utf8(s);
  return u.find(kMathSentinel) != std::u32string::npos;
}

// Top-level tables only: relation tests against a nested table would not
// survive the pipe-table rendering.
void collect_top_level_tables(const html::Element& el,
                              std::vector<const html::Element*>& out) {
  if (el.tag == "table") {
    out.push_back(&el);
    return;
  }
  if (skip_entirely(el)) return;
  for (const auto& child : el.children) {
    if (const auto* sub = std::get_if<html::Element>(&child)) {
      collect_top_level_tables(*sub, out);
    }
  }
}

void collect_math_sources(const html::Element& el, std::vector<MathSource>& out) {
  if (skip_entirely(el)) return;
  if (auto math = as_math_element(el)) {
    out.push_back(std::move(*math));
    return;
  }
  for (const auto& child : el.children) {
    if (const auto* sub = std::get_if<html::Element>(&child)) {
      collect_math_sources(*sub, out);
    }
  }
}

const html::Element& resolve_body(const html::Element& root) {
  if (const html::Element* body = html::find_first(root, "body")) return *body;
  return root;  // fragment without an explicit <body>: the root stands in
}

}  // namespace

std::uint64_t derive_page_seed(std::uint64_t corpus_seed, std::string_view doc_id) {
  // FNV-1a over the doc id, folded into the corpus seed.
  std::uint64_t h = 14695981039346656037ull;
  for (char c : doc_id) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h ^ corpus_seed;
}

std::string render_ground_truth(const GroundTruthPage& page) {
  html::Element root = html::parse_document(page.html);
  const html::Element& body = resolve_body(root);
  std::string rendered = MarkdownRenderer().render(body);
  if (textnorm::normalize(rendered).text.empty()) {
    throw TestGenError("page " + page.doc_id + " has no body text");
  }
  return rendered;
}

GenReport generate_with_report(const GroundTruthPage& page, const GenConfig& cfg) {
  if (cfg.presence_samples < 0 || cfg.order_samples < 0 || cfg.table_cell_samples < 0 ||
      cfg.min_anchor_words < 1 || cfg.max_anchor_words < cfg.min_anchor_words) {
    throw TestGenError("invalid generation config");
  }

  html::Element root = html::parse_document(page.html);
  const html::Element& body = resolve_body(root);

  std::string rendered = MarkdownRenderer().render(body);
  textnorm::NormalizedText haystack =
      textnorm::normalize(textnorm::strip_markdown(rendered));
  if (haystack.text.empty()) {
    throw TestGenError("page " + page.doc_id + " has no body text");
  }

  Rng rng(page.seed);
  GenReport report;
  auto category_for = [&cfg](core::TestKind kind) {
    return cfg.category.empty() ? std::string(core::kind_name(kind)) : cfg.category;
  };
  auto make_test = [&](core::TestKind kind, int ordinal, core::Payload payload) {
    core::TestCase test;
    test.id = page.doc_id + "/" + std::string(core::kind_name(kind)) + "/" +
              std::to_string(ordinal);
    test.doc_id = page.doc_id;
    test.page = 1;
    test.category = category_for(kind);
    test.payload = std::move(payload);
    return test;
  };

  // (1) absence tests from header/footer phrases
  int absent_ordinal = 0;
  std::vector<const html::Element*> boilerplate;
  html::find_all(root, "header", boilerplate);
  html::find_all(root, "footer", boilerplate);
  for (const auto* el : boilerplate) {
    std::u32string text = textnorm::normalize(el->text_content()).text;
    if (word_count(text) < static_cast<std::size_t>(cfg.min_anchor_words)) continue;
    std::string anchor = first_words(text, cfg.max_anchor_words);
    if (has_markdown_specials(anchor)) continue;
    // an anchor that already occurs in the body would fail its own page
    if (count_occurrences(haystack.text, textnorm::normalize(anchor).text, 1) > 0) continue;
    report.tests.push_back(make_test(core::TestKind::TextAbsence, absent_ordinal++,
                                     checks::AbsencePayload{anchor}));
  }

  // flows and eligible sentences
  std::vector<Flow> flows = FlowCollector().collect(body);
  struct Eligible {
    std::size_t flow;
    std::size_t index_in_flow;  // across the flow's sentence list
    std::string sentence;
  };
  std::vector<Eligible> eligible;
  std::vector<std::vector<std::string>> flow_sentences(flows.size());
  for (std::size_t f = 0; f < flows.size(); ++f) {
    for (const auto& block : flows[f].block_texts) {
      for (auto& sentence : split_sentences(block)) {
        flow_sentences[f].push_back(sentence);
      }
    }
    for (std::size_t s = 0; s < flow_sentences[f].size(); ++s) {
      const std::string& sentence = flow_sentences[f][s];
      if (has_sentinel(sentence) || has_markdown_specials(sentence)) continue;
      std::u32string norm = textnorm::normalize(sentence).text;
      std::size_t words = word_count(norm);
      if (words < static_cast<std::size_t>(cfg.min_anchor_words) ||
          words > static_cast<std::size_t>(cfg.max_anchor_words)) {
        continue;
      }
      if (count_occurrences(haystack.text, norm) != 1) continue;
      eligible.push_back(Eligible{f, s, sentence});
    }
  }

  // (2) presence tests from sampled unique sentences
  {
    std::vector<std::size_t> pool(eligible.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    rng.shuffle(pool);
    int emitted = 0;
    for (std::size_t idx : pool) {
      if (emitted >= cfg.presence_samples) break;
      report.tests.push_back(make_test(core::TestKind::TextPresence, emitted,
                                       checks::PresencePayload{eligible[idx].sentence}));
      ++emitted;
    }
  }

  // (3) reading-order tests from sentence pairs within one flow
  {
    std::vector<std::vector<std::size_t>> per_flow(flows.size());
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      per_flow[eligible[i].flow].push_back(i);
    }
    std::vector<std::size_t> flow_pool;
    for (std::size_t f = 0; f < flows.size(); ++f) {
      if (per_flow[f].size() >= 2) flow_pool.push_back(f);
    }
    std::set<std::pair<std::size_t, std::size_t>> used;
    int emitted = 0;
    int attempts = 0;
    while (emitted < cfg.order_samples && !flow_pool.empty() &&
           attempts < cfg.order_samples * 8) {
      ++attempts;
      std::size_t f = flow_pool[rng.below(flow_pool.size())];
      const auto& members = per_flow[f];
      std::size_t a = rng.below(members.size());
      std::size_t b = rng.below(members.size());
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (!used.insert({members[a], members[b]}).second) continue;
      checks::OrderPayload payload;
      payload.before = eligible[members[a]].sentence;
      payload.after = eligible[members[b]].sentence;
      for (const auto& cap : flows[f].adjacent_captions) {
        std::u32string norm = textnorm::normalize(cap).text;
        if (norm.empty() || has_markdown_specials(cap)) continue;
        std::string anchor = first_words(norm, cfg.max_anchor_words);
        payload.forbidden_between.push_back(anchor);
      }
      report.tests.push_back(
          make_test(core::TestKind::ReadingOrder, emitted, std::move(payload)));
      ++emitted;
    }
  }

  // (4) table-relation tests from sampled unique cells
  {
    std::vector<const html::Element*> tables_found;
    collect_top_level_tables(body, tables_found);
    int ordinal = 0;
    for (const auto* table_el : tables_found) {
      tables::TableGrid grid = tables::grid_from_element(*table_el);
      if (grid.rows < 2 || grid.cols < 1) continue;

      std::vector<std::pair<std::size_t, std::size_t>> targets;
      for (std::size_t r = std::max<std::size_t>(grid.header_rows, 1); r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
          const std::u32string& value = grid.at(r, c);
          if (value.empty()) continue;
          std::size_t copies = 0;
          for (const auto& cell : grid.cells) copies += cell == value ? 1 : 0;
          if (copies == 1) targets.emplace_back(r, c);
        }
      }
      rng.shuffle(targets);

      int taken = 0;
      for (auto [r, c] : targets) {
        if (taken >= cfg.table_cell_samples) break;
        using tables::Direction;
        std::vector<Direction> preferred, rest;
        auto consider = [&](Direction d) {
          auto slot = tables::relation_slot(grid, r, c, d);
          if (!slot) return;
          const std::u32string& value = grid.at(slot->first, slot->second);
          if (value.empty()) return;
          if (d == Direction::TopHeading) {
            // heading semantics must agree between the HTML grid and its
            // pipe-table rendering (header_rows drops to 1)
            if (value != grid.at(0, c)) return;
          }
          if (d == Direction::LeftHeading) {
            if (value != grid.at(r, 0)) return;
          }
          bool prefer = (d == Direction::TopHeading && grid.header_rows > 0) ||
                        (d == Direction::LeftHeading && grid.header_cols > 0);
          (prefer ? preferred : rest).push_back(d);
        };
        consider(Direction::TopHeading);
        consider(Direction::LeftHeading);
        consider(Direction::Up);
        consider(Direction::Down);
        consider(Direction::Left);
        consider(Direction::Right);
        rng.shuffle(preferred);
        rng.shuffle(rest);
        preferred.insert(preferred.end(), rest.begin(), rest.end());
        if (preferred.empty()) continue;

        std::size_t want = 1 + rng.below(2);  // 1-2 relations
        tables::TableRelationPayload payload;
        payload.cell = textnorm::encode_utf8(grid.at(r, c));
        for (std::size_t k = 0; k < preferred.size() && payload.relations.size() < want; ++k) {
          auto slot = tables::relation_slot(grid, r, c, preferred[k]);
          payload.relations.emplace_back(preferred[k],
                                         textnorm::encode_utf8(grid.at(slot->first, slot->second)));
        }
        report.tests.push_back(
            make_test(core::TestKind::TableRelation, ordinal++, std::move(payload)));
        ++taken;
      }
    }
  }

  // (5) math tests from math-marked elements
  {
    std::vector<MathSource> sources;
    collect_math_sources(body, sources);
    int ordinal = 0;
    for (const auto& src : sources) {
      if (src.latex.empty()) continue;
      bool parses = true;
      try {
        mathcmp::parse_latex(src.latex);
      } catch (const mathcmp::MathParseError&) {
        parses = false;
      }
      if (!parses && mathcmp::fallback_tokens(src.latex).size() < 3) continue;
      report.tests.push_back(make_test(core::TestKind::MathRender, ordinal++,
                                       core::MathRenderPayload{src.latex}));
    }
  }

  // (6) one repetition test and one script-purity test
  report.tests.push_back(
      make_test(core::TestKind::NgramRepetition, 0, checks::NgramRepeatPayload{}));
  {
    // The purity checker sees the raw candidate body, so the target set is
    // inferred from the raw rendering and widened until the page passes its
    // own threshold (math-heavy pages legitimately mix scripts).
    checks::ScriptPurityPayload payload;
    std::u32string raw = textnorm::decode_utf8(rendered);
    checks::ScriptTally tally = checks::tally_scripts(raw);
    for (const auto& [script, count] : tally.counts) {
      payload.target_scripts.push_back(script);
      if (checks::check_script_purity(raw, payload).passed) break;
    }
    if (!payload.target_scripts.empty()) {
      report.tests.push_back(
          make_test(core::TestKind::ScriptPurity, 0, std::move(payload)));
    }
  }

  // final self-check: a generated test that fails its own page is dropped
  core::CandidatePage self;
  self.doc_id = page.doc_id;
  self.body = rendered;
  self.finished = true;
  std::vector<core::TestCase> kept;
  kept.reserve(report.tests.size());
  for (auto& test : report.tests) {
    core::validate_test(test);
    auto outcomes = core::run_tests(self, {test});
    if (outcomes.size() == 1 && outcomes[0].passed) {
      kept.push_back(std::move(test));
    } else {
      report.warnings.push_back("dropped self-failing test " + test.id + ": " +
                                (outcomes.empty() ? "no outcome" : outcomes[0].detail));
    }
  }
  report.tests = std::move(kept);
  return report;
}

std::vector<core::TestCase> generate_tests(const GroundTruthPage& page,
                                           const GenConfig& cfg) {
  return generate_with_report(page, cfg).tests;
}

}  // namespace ocrcheck::testgen
