#include "ocrcheck/core.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ocrcheck::core {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::TextPresence: return "present";
    case TestKind::TextAbsence: return "absent";
    case TestKind::ReadingOrder: return "order";
    case TestKind::TableRelation: return "table";
    case TestKind::MathRender: return "math";
    case TestKind::NgramRepetition: return "ngram_repeat";
    case TestKind::ScriptPurity: return "script";
  }
  return "?";
}

std::optional<TestKind> kind_from_name(std::string_view name) {
  if (name == "present") return TestKind::TextPresence;
  if (name == "absent") return TestKind::TextAbsence;
  if (name == "order") return TestKind::ReadingOrder;
  if (name == "table") return TestKind::TableRelation;
  if (name == "math") return TestKind::MathRender;
  if (name == "ngram_repeat") return TestKind::NgramRepetition;
  if (name == "script") return TestKind::ScriptPurity;
  return std::nullopt;
}

TestKind TestCase::kind() const {
  struct Visitor {
    TestKind operator()(const checks::PresencePayload&) const { return TestKind::TextPresence; }
    TestKind operator()(const checks::AbsencePayload&) const { return TestKind::TextAbsence; }
    TestKind operator()(const checks::OrderPayload&) const { return TestKind::ReadingOrder; }
    TestKind operator()(const tables::TableRelationPayload&) const { return TestKind::TableRelation; }
    TestKind operator()(const MathRenderPayload&) const { return TestKind::MathRender; }
    TestKind operator()(const checks::NgramRepeatPayload&) const { return TestKind::NgramRepetition; }
    TestKind operator()(const checks::ScriptPurityPayload&) const { return TestKind::ScriptPurity; }
  };
  return std::visit(Visitor{}, payload);
}

namespace {

std::string nonempty_anchor(const json& obj, const char* field, std::size_t line_no) {
  if (!obj.contains(field) || !obj[field].is_string()) {
    throw StoreError(std::string("missing string field `") + field + "`", line_no);
  }
  std::string value = obj[field].get<std::string>();
  if (textnorm::normalize(value).text.empty()) {
    throw StoreError(std::string("field `") + field + "` is empty after normalization",
                     line_no);
  }
  return value;
}

}  // namespace

void validate_test(const TestCase& test) {
  if (test.id.empty()) throw StoreError("test id must be nonempty");
  if (test.doc_id.empty()) throw StoreError("doc_id must be nonempty for test " + test.id);
  if (test.page < 1) throw StoreError("page must be >= 1 for test " + test.id);
  if (test.max_diffs < 0) throw StoreError("max_diffs must be >= 0 for test " + test.id);

  struct Visitor {
    const TestCase& test;
    void require_anchor(const std::string& value, const char* what) const {
      if (textnorm::normalize(value).text.empty()) {
        throw StoreError(std::string(what) + " is empty after normalization for test " +
                         test.id);
      }
    }
    void operator()(const checks::PresencePayload& p) const {
      require_anchor(p.anchor, "presence anchor");
    }
    void operator()(const checks::AbsencePayload& p) const {
      require_anchor(p.anchor, "absence anchor");
    }
    void operator()(const checks::OrderPayload& p) const {
      require_anchor(p.before, "'before' anchor");
      require_anchor(p.after, "'after' anchor");
      if (p.before == p.after) {
        throw StoreError("'before' and 'after' anchors are identical for test " + test.id);
      }
      for (const auto& f : p.forbidden_between) require_anchor(f, "forbidden anchor");
    }
    void operator()(const tables::TableRelationPayload& p) const {
      require_anchor(p.cell, "cell value");
      if (p.relations.empty()) {
        throw StoreError("table test needs at least one relation: " + test.id);
      }
    }
    void operator()(const MathRenderPayload& p) const {
      if (p.reference.empty()) {
        throw StoreError("math reference is empty for test " + test.id);
      }
    }
    void operator()(const checks::NgramRepeatPayload& p) const {
      if (p.n_min < 1 || p.n_max < p.n_min || p.min_repeats < 2) {
        throw StoreError("invalid n-gram bounds for test " + test.id);
      }
    }
    void operator()(const checks::ScriptPurityPayload& p) const {
      if (p.target_scripts.empty()) {
        throw StoreError("script test needs at least one target script: " + test.id);
      }
      if (p.max_foreign_fraction < 0.0 || p.max_foreign_fraction > 1.0) {
        throw StoreError("max_foreign_fraction outside [0,1] for test " + test.id);
      }
    }
  };
  std::visit(Visitor{test}, test.payload);
}

TestCase parse_test_line(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw StoreError(std::string("malformed JSON: ") + e.what(), line_no);
  }
  if (!obj.is_object()) throw StoreError("expected a JSON object", line_no);

  TestCase test;
  try {
    test.id = obj.at("id").get<std::string>();
    test.doc_id = obj.at("doc_id").get<std::string>();
    test.page = obj.at("page").get<int>();
    test.category = obj.at("category").get<std::string>();
  } catch (const json::exception& e) {
    throw StoreError(std::string("missing or mistyped common field: ") + e.what(), line_no);
  }
  test.max_diffs = obj.value("max_diffs", 0);

  std::string type = obj.value("type", "");
  auto kind = kind_from_name(type);
  if (!kind) throw StoreError("unknown `type`: \"" + type + "\"", line_no);

  try {
    switch (*kind) {
      case TestKind::TextPresence:
        test.payload = checks::PresencePayload{nonempty_anchor(obj, "text", line_no)};
        break;
      case TestKind::TextAbsence:
        test.payload = checks::AbsencePayload{nonempty_anchor(obj, "text", line_no)};
        break;
      case TestKind::ReadingOrder: {
        checks::OrderPayload p;
        p.before = nonempty_anchor(obj, "before", line_no);
        p.after = nonempty_anchor(obj, "after", line_no);
        if (obj.contains("forbidden")) {
          p.forbidden_between = obj["forbidden"].get<std::vector<std::string>>();
        }
        test.payload = std::move(p);
        break;
      }
      case TestKind::TableRelation: {
        tables::TableRelationPayload p;
        p.cell = nonempty_anchor(obj, "cell", line_no);
        for (const char* dir :
             {"up", "down", "left", "right", "top_heading", "left_heading"}) {
          if (obj.contains(dir)) {
            p.relations.emplace_back(*tables::direction_from_name(dir),
                                     obj[dir].get<std::string>());
          }
        }
        test.payload = std::move(p);
        break;
      }
      case TestKind::MathRender:
        test.payload = MathRenderPayload{obj.at("math").get<std::string>()};
        break;
      case TestKind::NgramRepetition: {
        checks::NgramRepeatPayload p;
        p.n_min = obj.value("n_min", p.n_min);
        p.n_max = obj.value("n_max", p.n_max);
        p.min_repeats = obj.value("min_repeats", p.min_repeats);
        test.payload = p;
        break;
      }
      case TestKind::ScriptPurity: {
        checks::ScriptPurityPayload p;
        if (!obj.contains("scripts")) throw StoreError("missing `scripts`", line_no);
        for (const auto& name : obj["scripts"]) {
          auto script = uniscript::script_from_name(name.get<std::string>());
          if (!script) {
            throw StoreError("unknown script name \"" + name.get<std::string>() + "\"",
                             line_no);
          }
          p.target_scripts.push_back(*script);
        }
        p.max_foreign_fraction = obj.value("max_foreign_fraction", p.max_foreign_fraction);
        test.payload = std::move(p);
        break;
      }
    }
  } catch (const json::exception& e) {
    throw StoreError(std::string("bad payload: ") + e.what(), line_no);
  }

  try {
    validate_test(test);
  } catch (const StoreError& e) {
    throw StoreError(e.what(), line_no);
  }
  return test;
}

TestStore load_test_store(std::istream& in) {
  TestStore store;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    TestCase test = parse_test_line(line, line_no);
    if (!seen_ids.insert(test.id).second) {
      throw StoreError("duplicate test id \"" + test.id + "\"", line_no);
    }
    store[test.doc_id].push_back(std::move(test));
  }
  return store;
}

TestStore load_test_store_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open test store: " + path);
  return load_test_store(in);
}

std::string serialize_test(const TestCase& test) {
  ordered_json obj;
  obj["id"] = test.id;
  obj["doc_id"] = test.doc_id;
  obj["page"] = test.page;
  obj["category"] = test.category;
  obj["type"] = std::string(kind_name(test.kind()));
  if (test.max_diffs != 0) obj["max_diffs"] = test.max_diffs;

  struct Visitor {
    ordered_json& obj;
    void operator()(const checks::PresencePayload& p) const { obj["text"] = p.anchor; }
    void operator()(const checks::AbsencePayload& p) const { obj["text"] = p.anchor; }
    void operator()(const checks::OrderPayload& p) const {
      obj["before"] = p.before;
      obj["after"] = p.after;
      if (!p.forbidden_between.empty()) obj["forbidden"] = p.forbidden_between;
    }
    void operator()(const tables::TableRelationPayload& p) const {
      obj["cell"] = p.cell;
      for (const auto& [dir, value] : p.relations) {
        obj[std::string(tables::direction_name(dir))] = value;
      }
    }
    void operator()(const MathRenderPayload& p) const { obj["math"] = p.reference; }
    void operator()(const checks::NgramRepeatPayload& p) const {
      obj["n_min"] = p.n_min;
      obj["n_max"] = p.n_max;
      obj["min_repeats"] = p.min_repeats;
    }
    void operator()(const checks::ScriptPurityPayload& p) const {
      std::vector<std::string> names;
      names.reserve(p.target_scripts.size());
      for (auto s : p.target_scripts) names.emplace_back(uniscript::script_name(s));
      obj["scripts"] = names;
      obj["max_foreign_fraction"] = p.max_foreign_fraction;
    }
  };
  std::visit(Visitor{obj}, test.payload);
  return obj.dump();
}

void write_test_store(const TestStore& store, std::ostream& out) {
  for (const auto& [doc_id, tests] : store) {
    for (const auto& test : tests) {
      out << serialize_test(test) << '\n';
    }
  }
}

PreparedPage::PreparedPage(const CandidatePage& page)
    : page_(page), prose_(textnorm::normalize(textnorm::strip_markdown(page.body))) {}

const std::u32string& PreparedPage::scalars() const {
  if (!scalars_) scalars_ = textnorm::decode_utf8(page_.body);
  return *scalars_;
}

const std::vector<tables::TableGrid>& PreparedPage::grids() const {
  if (!grids_) grids_ = tables::extract_tables(page_.body);
  return *grids_;
}

const std::vector<std::string>& PreparedPage::math_blocks() const {
  if (!math_blocks_) math_blocks_ = mathcmp::extract_math_blocks(page_.body);
  return *math_blocks_;
}

TestOutcome run_one(const PreparedPage& page, const TestCase& test) {
  struct Visitor {
    const PreparedPage& page;
    int max_diffs;
    TestOutcome operator()(const checks::PresencePayload& p) const {
      return checks::check_presence(page.prose(), p, max_diffs);
    }
    TestOutcome operator()(const checks::AbsencePayload& p) const {
      return checks::check_absence(page.prose(), p, max_diffs);
    }
    TestOutcome operator()(const checks::OrderPayload& p) const {
      return checks::check_order(page.prose(), p, max_diffs);
    }
    TestOutcome operator()(const tables::TableRelationPayload& p) const {
      return tables::check_table_relation(page.grids(), p, max_diffs);
    }
    TestOutcome operator()(const MathRenderPayload& p) const {
      return mathcmp::math_equivalent(p.reference, page.math_blocks());
    }
    TestOutcome operator()(const checks::NgramRepeatPayload& p) const {
      return checks::check_ngram_repeat(page.prose(), p);
    }
    TestOutcome operator()(const checks::ScriptPurityPayload& p) const {
      return checks::check_script_purity(page.scalars(), p);
    }
  };
  TestOutcome out = std::visit(Visitor{page, test.max_diffs}, test.payload);
  out.test_id = test.id;
  return out;
}

std::vector<TestOutcome> run_tests(const CandidatePage& page,
                                   const std::vector<TestCase>& tests) {
  for (const auto& test : tests) {
    if (test.doc_id != page.doc_id) {
      throw std::invalid_argument("test " + test.id + " targets doc \"" + test.doc_id +
                                  "\" but page is \"" + page.doc_id + "\"");
    }
  }
  PreparedPage prepared(page);
  std::vector<TestOutcome> outcomes;
  outcomes.reserve(tests.size());
  for (const auto& test : tests) {
    try {
      outcomes.push_back(run_one(prepared, test));
    } catch (const std::exception& e) {
      // A checker crash must not abort a reward batch.
      TestOutcome out;
      out.test_id = test.id;
      out.passed = false;
      out.detail = std::string("checker error: ") + e.what();
      outcomes.push_back(std::move(out));
    }
  }
  return outcomes;
}

}  // namespace ocrcheck::core
