#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ocrcheck/core.hpp"

namespace ocrcheck::reward {

struct RewardConfig {
  double w_tests = 1.0;
  double w_eos = 0.1;
  double w_meta = 0.1;
  std::vector<std::string> required_meta_keys = {
      "primary_language", "rotation_correction", "is_rotation_valid"};
};

struct FrontMatter {
  bool present = false;
  std::vector<std::pair<std::string, std::string>> entries;  // in document order

  const std::string* value(std::string_view key) const;
};

/// Finds a leading metadata block in a raw completion: either a block
/// delimited by `---` lines, or the lines before the first blank line when
/// they are all key: value pairs including at least one known metadata key.
FrontMatter parse_front_matter(std::string_view raw);

/// Splits a raw completion into front matter + body.
core::CandidatePage split_completion(std::string doc_id, std::string_view raw,
                                     bool finished);

// Key-level domain rules: primary_language is a short alphabetic tag,
// rotation_correction is one of 0/90/180/270, is_rotation_valid is a boolean.
bool meta_value_valid(std::string_view key, std::string_view value);

// valid-required-key count over cfg.required_meta_keys.
int count_valid_meta(const FrontMatter& fm, const std::vector<std::string>& required);

/// pass_rate, EOS and metadata rewards folded into the composite:
/// (w_tests*pass + w_eos*eos + w_meta*meta) / (w_tests + w_eos + w_meta).
core::PageScore compute_reward(const core::CandidatePage& page,
                               const std::vector<core::TestCase>& tests,
                               const RewardConfig& cfg = {});

/// Named f32 tensors with insertion order preserved.
class TensorMap {
 public:
  struct Tensor {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::vector<float> data;
  };

  void put(std::string name, std::vector<std::uint64_t> shape, std::vector<float> data);
  const std::vector<Tensor>& tensors() const { return tensors_; }
  const Tensor* find(std::string_view name) const;
  std::size_t size() const { return tensors_.size(); }

 private:
  std::vector<Tensor> tensors_;
};

/// Elementwise arithmetic mean of n >= 2 checkpoints with identical name
/// sets and shapes; mismatches throw with the offending names.
TensorMap soup(const std::vector<TensorMap>& checkpoints);

// Container format: "TMAP" magic, u32 version, u32 tensor count, then one
// header per tensor (u32 name length + UTF-8 name, u32 rank, u64 dims, u64
// byte offset into the data section), then contiguous little-endian f32
// payloads in header order.
void write_tensor_map(const TensorMap& map, std::ostream& out);
TensorMap read_tensor_map(std::istream& in);
void write_tensor_map_file(const TensorMap& map, const std::string& path);
TensorMap read_tensor_map_file(const std::string& path);

}  // namespace ocrcheck::reward
