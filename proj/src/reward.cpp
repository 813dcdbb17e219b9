#include "ocrcheck/reward.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace ocrcheck::reward {

namespace {

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = eol + 1;
  }
  return lines;
}

bool key_value_line(std::string_view line, std::string* key, std::string* value) {
  std::size_t colon = line.find(':');
  if (colon == std::string_view::npos) return false;
  std::string_view k = trim(line.substr(0, colon));
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  if (key) *key = std::string(k);
  if (value) *value = std::string(trim(line.substr(colon + 1)));
  return true;
}

void parse_block(std::string_view block, FrontMatter& fm) {
  for (std::string_view line : split_lines(block)) {
    if (trim(line).empty()) continue;
    std::string key, value;
    if (key_value_line(line, &key, &value)) {
      fm.entries.emplace_back(std::move(key), std::move(value));
    }
  }
}

}  // namespace

const std::string* FrontMatter::value(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool meta_value_valid(std::string_view key, std::string_view value) {
  if (key == "primary_language") {
    if (value.empty() || value.size() > 8) return false;
    return std::all_of(value.begin(), value.end(), [](unsigned char c) {
      return std::isalpha(c);
    });
  }
  if (key == "rotation_correction") {
    return value == "0" || value == "90" || value == "180" || value == "270";
  }
  if (key == "is_rotation_valid") {
    return value == "true" || value == "false";
  }
  return !value.empty();
}

FrontMatter parse_front_matter(std::string_view raw) {
  FrontMatter fm;
  auto lines = split_lines(raw);
  if (lines.empty()) return fm;

  if (trim(lines[0]) == "---") {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (trim(lines[i]) == "---") {
        std::string block;
        for (std::size_t k = 1; k < i; ++k) {
          block += std::string(lines[k]);
          block += '\n';
        }
        fm.present = true;
        parse_block(block, fm);
        return fm;
      }
    }
    return fm;  // unterminated block: treated as body text
  }

  // Bare leading key: value lines up to the first blank line. Guarded by the
  // presence of at least one known metadata key so that prose with a colon in
  // the first line is not swallowed.
  std::string block;
  bool any_known = false;
  for (std::string_view line : lines) {
    if (trim(line).empty()) break;
    std::string key;
    if (!key_value_line(line, &key, nullptr)) return fm;
    block += std::string(line);
    block += '\n';
    if (key == "primary_language" || key == "rotation_correction" ||
        key == "is_rotation_valid") {
      any_known = true;
    }
  }
  if (!any_known || block.empty()) return fm;
  fm.present = true;
  parse_block(block, fm);
  return fm;
}

core::CandidatePage split_completion(std::string doc_id, std::string_view raw,
                                     bool finished) {
  core::CandidatePage page;
  page.doc_id = std::move(doc_id);
  page.finished = finished;

  auto lines = split_lines(raw);
  if (!lines.empty() && trim(lines[0]) == "---") {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (trim(lines[i]) == "---") {
        std::string block;
        for (std::size_t k = 1; k < i; ++k) {
          block += std::string(lines[k]);
          block += '\n';
        }
        page.front_matter = std::move(block);
        std::string body;
        for (std::size_t k = i + 1; k < lines.size(); ++k) {
          body += std::string(lines[k]);
          if (k + 1 < lines.size()) body += '\n';
        }
        page.body = std::move(body);
        return page;
      }
    }
  }

  FrontMatter fm = parse_front_matter(raw);
  if (fm.present) {
    // bare key:value header, ends at the first blank line
    std::string block, body;
    std::size_t i = 0;
    for (; i < lines.size() && !trim(lines[i]).empty(); ++i) {
      block += std::string(lines[i]);
      block += '\n';
    }
    for (std::size_t k = i; k < lines.size(); ++k) {
      body += std::string(lines[k]);
      if (k + 1 < lines.size()) body += '\n';
    }
    page.front_matter = std::move(block);
    page.body = std::move(body);
    return page;
  }

  page.body = std::string(raw);
  return page;
}

int count_valid_meta(const FrontMatter& fm, const std::vector<std::string>& required) {
  int valid = 0;
  for (const auto& key : required) {
    const std::string* v = fm.value(key);
    if (v && meta_value_valid(key, *v)) ++valid;
  }
  return valid;
}

core::PageScore compute_reward(const core::CandidatePage& page,
                               const std::vector<core::TestCase>& tests,
                               const RewardConfig& cfg) {
  if (tests.empty()) {
    throw std::invalid_argument("reward undefined for empty test list (doc " +
                                page.doc_id + ")");
  }
  if (cfg.w_tests <= 0.0 || cfg.w_eos < 0.0 || cfg.w_meta < 0.0) {
    throw std::invalid_argument("reward weights must be >= 0 with w_tests > 0");
  }
  core::PageScore score;
  score.doc_id = page.doc_id;
  score.outcomes = core::run_tests(page, tests);

  std::size_t passed = 0;
  for (const auto& o : score.outcomes) passed += o.passed ? 1 : 0;
  score.pass_rate = static_cast<double>(passed) / static_cast<double>(score.outcomes.size());
  score.eos_reward = page.finished ? 1.0 : 0.0;

  FrontMatter fm;
  if (page.front_matter) {
    fm.present = true;
    parse_block(*page.front_matter, fm);
  }
  int valid = count_valid_meta(fm, cfg.required_meta_keys);
  score.metadata_reward = cfg.required_meta_keys.empty()
                              ? 1.0
                              : static_cast<double>(valid) /
                                    static_cast<double>(cfg.required_meta_keys.size());

  double total = cfg.w_tests + cfg.w_eos + cfg.w_meta;
  score.composite = (cfg.w_tests * score.pass_rate + cfg.w_eos * score.eos_reward +
                     cfg.w_meta * score.metadata_reward) /
                    total;
  return score;
}

void TensorMap::put(std::string name, std::vector<std::uint64_t> shape,
                    std::vector<float> data) {
  if (find(name)) throw std::invalid_argument("duplicate tensor name: " + name);
  std::uint64_t expect = 1;
  for (std::uint64_t d : shape) {
    if (d == 0) throw std::invalid_argument("zero dimension in tensor " + name);
    expect *= d;
  }
  if (expect != data.size()) {
    throw std::invalid_argument("data length does not match shape for tensor " + name);
  }
  tensors_.push_back(Tensor{std::move(name), std::move(shape), std::move(data)});
}

const TensorMap::Tensor* TensorMap::find(std::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

TensorMap soup(const std::vector<TensorMap>& checkpoints) {
  if (checkpoints.size() < 2) {
    throw std::invalid_argument("souping needs at least two checkpoints");
  }
  const TensorMap& first = checkpoints.front();
  // name-set agreement, reported as a symmetric difference
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    std::set<std::string> a, b;
    for (const auto& t : first.tensors()) a.insert(t.name);
    for (const auto& t : checkpoints[i].tensors()) b.insert(t.name);
    if (a != b) {
      std::string diff;
      for (const auto& n : a) {
        if (!b.count(n)) diff += (diff.empty() ? "" : ", ") + n;
      }
      for (const auto& n : b) {
        if (!a.count(n)) diff += (diff.empty() ? "" : ", ") + n;
      }
      throw std::invalid_argument("checkpoint " + std::to_string(i) +
                                  " name set differs: " + diff);
    }
  }

  TensorMap out;
  const double inv_n = 1.0 / static_cast<double>(checkpoints.size());
  for (const auto& t : first.tensors()) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
      const auto* other = checkpoints[i].find(t.name);
      if (other->shape != t.shape) {
        throw std::invalid_argument("shape mismatch for tensor " + t.name);
      }
    }
    std::vector<float> mean(t.data.size());
    for (std::size_t e = 0; e < t.data.size(); ++e) {
      double acc = 0.0;
      for (const auto& cp : checkpoints) acc += cp.find(t.name)->data[e];
      mean[e] = static_cast<float>(acc * inv_n);
    }
    out.put(t.name, t.shape, std::move(mean));
  }
  return out;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
               static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (i * 8)) & 0xFF);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("truncated tensor map");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated tensor map");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

constexpr std::uint32_t kTensorMapVersion = 1;

}  // namespace

void write_tensor_map(const TensorMap& map, std::ostream& out) {
  out.write("TMAP", 4);
  put_u32(out, kTensorMapVersion);
  put_u32(out, static_cast<std::uint32_t>(map.size()));
  std::uint64_t offset = 0;
  for (const auto& t : map.tensors()) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::uint64_t d : t.shape) put_u64(out, d);
    put_u64(out, offset);
    offset += t.data.size() * sizeof(float);
  }
  for (const auto& t : map.tensors()) {
    for (float f : t.data) {
      std::uint32_t bits;
      static_assert(sizeof bits == sizeof f);
      std::memcpy(&bits, &f, sizeof bits);
      put_u32(out, bits);
    }
  }
}

TensorMap read_tensor_map(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != "TMAP") {
    throw std::runtime_error("not a tensor map (bad magic)");
  }
  std::uint32_t version = get_u32(in);
  if (version != kTensorMapVersion) {
    throw std::runtime_error("unsupported tensor map version " + std::to_string(version));
  }
  std::uint32_t count = get_u32(in);
  struct Header {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::uint64_t offset;
    std::uint64_t elements;
  };
  std::vector<Header> headers;
  headers.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Header h;
    std::uint32_t name_len = get_u32(in);
    if (name_len > 4096) throw std::runtime_error("tensor name too long");
    h.name.resize(name_len);
    in.read(h.name.data(), name_len);
    std::uint32_t rank = get_u32(in);
    if (rank > 64) throw std::runtime_error("tensor rank too large");
    h.elements = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      std::uint64_t d = get_u64(in);
      if (d == 0) throw std::runtime_error("zero dimension in tensor " + h.name);
      h.shape.push_back(d);
      h.elements *= d;
    }
    h.offset = get_u64(in);
    if (!in) throw std::runtime_error("truncated tensor map header");
    headers.push_back(std::move(h));
  }
  // payloads are contiguous in header order
  TensorMap map;
  std::uint64_t expected_offset = 0;
  for (const auto& h : headers) {
    if (h.offset != expected_offset) {
      throw std::runtime_error("tensor " + h.name + " has unexpected data offset");
    }
    std::vector<float> data(h.elements);
    for (std::uint64_t e = 0; e < h.elements; ++e) {
      std::uint32_t bits = get_u32(in);
      float f;
      std::memcpy(&f, &bits, sizeof f);
      data[e] = f;
    }
    expected_offset += h.elements * sizeof(float);
    map.put(h.name, h.shape, std::move(data));
  }
  return map;
}

void write_tensor_map_file(const TensorMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
  write_tensor_map(map, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

TensorMap read_tensor_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open: " + path);
  return read_tensor_map(in);
}

}  // namespace ocrcheck::reward
