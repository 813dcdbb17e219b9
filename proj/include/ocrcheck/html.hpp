#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ocrcheck::html {

// Permissive HTML parser for the clean, generated pages this pipeline
// consumes. Unknown tags become ordinary elements; stray close tags are
// dropped; entities in the common set are decoded.

struct Element;
using Node = std::variant<Element, std::string>;  // string = text, entities decoded

struct Element {
  std::string tag;  // lowercased
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<Node> children;

  std::optional<std::string_view> attr(std::string_view name) const;
  bool has_class(std::string_view token) const;
  // Recursive text, with a space inserted at block-level boundaries and <br>.
  std::string text_content() const;
};

/// Parses a whole document. The returned element is a synthetic root whose
/// children are the top-level nodes; <!DOCTYPE>, comments, <script> and
/// <style> content are dropped.
Element parse_document(std::string_view source);

const Element* find_first(const Element& root, std::string_view tag);
void find_all(const Element& root, std::string_view tag, std::vector<const Element*>& out);
void for_each_element(const Element& root, const std::function<void(const Element&)>& fn);

std::string decode_entities(std::string_view text);
bool is_block_tag(std::string_view tag);
bool is_void_tag(std::string_view tag);

}  // namespace ocrcheck::html
