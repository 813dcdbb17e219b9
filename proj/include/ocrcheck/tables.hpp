#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocrcheck/html.hpp"
#include "ocrcheck/types.hpp"

namespace ocrcheck::tables {

/// Span-expanded rectangular grid of normalized cell texts. A spanning
/// cell's text is replicated into every slot it covers.
struct TableGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::u32string> cells;  // row-major, rows*cols entries
  std::size_t header_rows = 0;
  std::size_t header_cols = 0;

  const std::u32string& at(std::size_t r, std::size_t c) const {
    return cells[r * cols + c];
  }
};

enum class Direction { Up, Down, Left, Right, TopHeading, LeftHeading };

std::string_view direction_name(Direction d);
std::optional<Direction> direction_from_name(std::string_view name);

struct TableRelationPayload {
  std::string cell;
  std::vector<std::pair<Direction, std::string>> relations;  // nonempty
};

/// Finds every Markdown pipe table and HTML <table> in the body. Malformed
/// tables are skipped; a note per skip lands in *warnings when given.
std::vector<TableGrid> extract_tables(std::string_view body,
                                      std::vector<std::string>* warnings = nullptr);

// Grid from an already-parsed <table> element; nested tables are appended to
// *nested as their own grids when requested.
TableGrid grid_from_element(const html::Element& table,
                            std::vector<TableGrid>* nested = nullptr);

/// Passes iff some slot in some grid matches `cell` (whole-cell comparison
/// within max_diffs edits) and every requested relation holds at that slot.
core::TestOutcome check_table_relation(const std::vector<TableGrid>& grids,
                                       const TableRelationPayload& payload,
                                       int max_diffs);
core::TestOutcome check_table_relation(std::string_view body,
                                       const TableRelationPayload& payload,
                                       int max_diffs);

/// Slot addressed by a relation, or nullopt when it does not exist.
/// TopHeading resolves to the nearest header row above the slot (topmost row
/// when the grid has no header rows); LeftHeading analogously on columns.
std::optional<std::pair<std::size_t, std::size_t>> relation_slot(
    const TableGrid& grid, std::size_t r, std::size_t c, Direction d);

}  // namespace ocrcheck::tables
