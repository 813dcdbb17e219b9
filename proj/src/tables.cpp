#include "ocrcheck/tables.hpp"

#include <algorithm>
#include <cctype>

#include "ocrcheck/textnorm.hpp"

namespace ocrcheck::tables {

namespace {

std::u32string normalize_cell(std::string_view raw) {
  return textnorm::normalize(raw).text;
}

long span_attr(const html::Element& cell, std::string_view name) {
  auto v = cell.attr(name);
  if (!v) return 1;
  long n = 0;
  for (char c : *v) {
    if (c < '0' || c > '9') return 1;
    n = n * 10 + (c - '0');
    if (n > 512) return 512;  // runaway spans are clamped
  }
  return n < 1 ? 1 : n;
}

struct PendingCell {
  std::u32string text;
  bool header = false;
};

}  // namespace

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::TopHeading: return "top_heading";
    case Direction::LeftHeading: return "left_heading";
  }
  return "?";
}

std::optional<Direction> direction_from_name(std::string_view name) {
  if (name == "up") return Direction::Up;
  if (name == "down") return Direction::Down;
  if (name == "left") return Direction::Left;
  if (name == "right") return Direction::Right;
  if (name == "top_heading") return Direction::TopHeading;
  if (name == "left_heading") return Direction::LeftHeading;
  return std::nullopt;
}

TableGrid grid_from_element(const html::Element& table, std::vector<TableGrid>* nested) {
  // Row-by-row grid filling: each cell lands in the first free slot of its
  // row; rowspan/colspan mark the covered slots occupied.
  std::vector<std::vector<std::optional<PendingCell>>> grid;
  std::vector<const html::Element*> rows;

  std::function<void(const html::Element&)> collect_rows = [&](const html::Element& el) {
    for (const auto& child : el.children) {
      const auto* sub = std::get_if<html::Element>(&child);
      if (!sub) continue;
      if (sub->tag == "tr") {
        rows.push_back(sub);
      } else if (sub->tag == "thead" || sub->tag == "tbody" || sub->tag == "tfoot") {
        collect_rows(*sub);
      }
    }
  };
  collect_rows(table);

  std::size_t header_row_limit = 0;  // rows inside <thead> or leading all-<th> rows
  bool counting_headers = true;

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (grid.size() <= r) grid.emplace_back();
    std::size_t col = 0;
    bool all_th = false;
    bool any_cell = false;
    for (const auto& child : rows[r]->children) {
      const auto* cell = std::get_if<html::Element>(&child);
      if (!cell || (cell->tag != "td" && cell->tag != "th")) continue;
      if (!any_cell) all_th = true;
      any_cell = true;
      if (cell->tag != "th") all_th = false;

      while (col < grid[r].size() && grid[r][col].has_value()) ++col;

      if (nested) {
        std::vector<const html::Element*> inner;
        html::find_all(*cell, "table", inner);
        for (const auto* t : inner) {
          if (t != cell) nested->push_back(grid_from_element(*t, nested));
        }
      }

      long rowspan = span_attr(*cell, "rowspan");
      long colspan = span_attr(*cell, "colspan");
      PendingCell pc{normalize_cell(cell->text_content()), cell->tag == "th"};
      for (long dr = 0; dr < rowspan; ++dr) {
        std::size_t rr = r + static_cast<std::size_t>(dr);
        if (grid.size() <= rr) grid.resize(rr + 1);
        if (grid[rr].size() < col + static_cast<std::size_t>(colspan)) {
          grid[rr].resize(col + static_cast<std::size_t>(colspan));
        }
        for (long dc = 0; dc < colspan; ++dc) {
          grid[rr][col + static_cast<std::size_t>(dc)] = pc;
        }
      }
      col += static_cast<std::size_t>(colspan);
    }
    if (counting_headers && any_cell && all_th) {
      header_row_limit = r + 1;
    } else if (any_cell) {
      counting_headers = false;
    }
  }

  TableGrid out;
  out.rows = grid.size();
  for (const auto& row : grid) out.cols = std::max(out.cols, row.size());
  if (out.rows == 0 || out.cols == 0) return TableGrid{};
  out.cells.resize(out.rows * out.cols);
  std::vector<char> th_slot(out.rows * out.cols, 0);
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      if (grid[r][c]) {
        out.cells[r * out.cols + c] = grid[r][c]->text;
        th_slot[r * out.cols + c] = grid[r][c]->header ? 1 : 0;
      }
    }
  }
  out.header_rows = header_row_limit;
  // leading columns whose every slot is a <th>
  for (std::size_t c = 0; c < out.cols; ++c) {
    bool all = true;
    for (std::size_t r = 0; r < out.rows && all; ++r) all = th_slot[r * out.cols + c];
    if (!all) break;
    out.header_cols = c + 1;
  }
  return out;
}

namespace {

bool is_separator_row(std::string_view line) {
  bool saw_dash = false;
  bool saw_pipe = false;
  for (char c : line) {
    switch (c) {
      case '-': saw_dash = true; break;
      case '|': saw_pipe = true; break;
      case ':': case ' ': case '\t': break;
      default: return false;
    }
  }
  return saw_dash && saw_pipe;
}

std::vector<std::string> split_pipe_row(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool escaped = false;
  for (char c : line) {
    if (escaped) {
      cur.push_back(c);
      escaped = false;
      continue;
    }
    if (c == '\\') {
      escaped = true;
      continue;
    }
    if (c == '|') {
      cells.push_back(cur);
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  cells.push_back(cur);
  auto is_blank = [](const std::string& s) {
    return s.find_first_not_of(" \t") == std::string::npos;
  };
  // leading/trailing pipes produce empty edge cells
  if (!cells.empty() && is_blank(cells.front())) cells.erase(cells.begin());
  if (!cells.empty() && is_blank(cells.back())) cells.pop_back();
  return cells;
}

std::optional<TableGrid> parse_pipe_table(const std::vector<std::string_view>& lines) {
  if (lines.size() < 2 || !is_separator_row(lines[1])) return std::nullopt;
  std::vector<std::vector<std::u32string>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 1) continue;  // separator
    auto cells = split_pipe_row(lines[i]);
    std::vector<std::u32string> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) row.push_back(normalize_cell(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return std::nullopt;
  TableGrid grid;
  grid.rows = rows.size();
  for (const auto& row : rows) grid.cols = std::max(grid.cols, row.size());
  if (grid.cols == 0) return std::nullopt;
  grid.cells.resize(grid.rows * grid.cols);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      grid.cells[r * grid.cols + c] = rows[r][c];
    }
  }
  grid.header_rows = 1;
  grid.header_cols = 0;
  return grid;
}

// Case-insensitive search for an HTML tag opener; the tag name must be
// followed by a non-name character so "<tables>" does not match "<table".
std::size_t find_tag(std::string_view body, std::string_view tag, std::size_t from) {
  while (from + tag.size() <= body.size()) {
    std::size_t lt = body.find('<', from);
    if (lt == std::string_view::npos || lt + tag.size() > body.size()) {
      return std::string_view::npos;
    }
    bool match = true;
    for (std::size_t i = 1; i < tag.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(body[lt + i])) != tag[i]) {
        match = false;
        break;
      }
    }
    if (match && lt + tag.size() < body.size() &&
        std::isalnum(static_cast<unsigned char>(body[lt + tag.size()]))) {
      match = false;
    }
    if (match) return lt;
    from = lt + 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::vector<TableGrid> extract_tables(std::string_view body,
                                      std::vector<std::string>* warnings) {
  std::vector<TableGrid> grids;
  std::string masked(body);

  // HTML tables first; their byte ranges are blanked out before the pipe scan.
  std::size_t pos = 0;
  while (true) {
    std::size_t start = find_tag(masked, "<table", pos);
    if (start == std::string::npos) break;
    std::size_t scan = start + 6;
    std::size_t depth = 1;
    std::size_t end = std::string::npos;
    while (depth > 0) {
      std::size_t open = find_tag(masked, "<table", scan);
      std::size_t close = find_tag(masked, "</table", scan);
      if (close == std::string::npos) break;
      if (open != std::string::npos && open < close) {
        ++depth;
        scan = open + 6;
      } else {
        --depth;
        std::size_t gt = masked.find('>', close);
        scan = gt == std::string::npos ? masked.size() : gt + 1;
        if (depth == 0) end = scan;
      }
    }
    if (end == std::string::npos) {
      if (warnings) warnings->push_back("unterminated <table>, skipped");
      pos = start + 6;
      continue;
    }
    html::Element doc = html::parse_document(std::string_view(masked).substr(start, end - start));
    if (const html::Element* table = html::find_first(doc, "table")) {
      std::vector<TableGrid> nested;
      TableGrid grid = grid_from_element(*table, &nested);
      if (grid.rows > 0) {
        grids.push_back(std::move(grid));
      } else if (warnings) {
        warnings->push_back("empty <table>, skipped");
      }
      for (auto& g : nested) {
        if (g.rows > 0) grids.push_back(std::move(g));
      }
    }
    std::fill(masked.begin() + static_cast<long>(start), masked.begin() + static_cast<long>(end), ' ');
    pos = end;
  }

  // Markdown pipe tables over the remaining text.
  std::vector<std::string_view> block;
  std::string_view rest(masked);
  std::size_t line_start = 0;
  auto flush = [&]() {
    if (block.size() >= 2) {
      if (auto grid = parse_pipe_table(block)) {
        grids.push_back(std::move(*grid));
      } else if (warnings) {
        warnings->push_back("pipe block without separator row, skipped");
      }
    }
    block.clear();
  };
  while (line_start <= rest.size()) {
    std::size_t eol = rest.find('\n', line_start);
    std::string_view line = rest.substr(
        line_start, eol == std::string_view::npos ? rest.size() - line_start : eol - line_start);
    if (line.find('|') != std::string_view::npos) {
      block.push_back(line);
    } else {
      flush();
    }
    if (eol == std::string_view::npos) break;
    line_start = eol + 1;
  }
  flush();
  return grids;
}

std::optional<std::pair<std::size_t, std::size_t>> relation_slot(
    const TableGrid& grid, std::size_t r, std::size_t c, Direction d) {
  switch (d) {
    case Direction::Up:
      if (r == 0) return std::nullopt;
      return std::make_pair(r - 1, c);
    case Direction::Down:
      if (r + 1 >= grid.rows) return std::nullopt;
      return std::make_pair(r + 1, c);
    case Direction::Left:
      if (c == 0) return std::nullopt;
      return std::make_pair(r, c - 1);
    case Direction::Right:
      if (c + 1 >= grid.cols) return std::nullopt;
      return std::make_pair(r, c + 1);
    case Direction::TopHeading: {
      if (r == 0) return std::nullopt;
      std::size_t row = grid.header_rows > 0 ? std::min(r, grid.header_rows) - 1 : 0;
      return std::make_pair(row, c);
    }
    case Direction::LeftHeading: {
      if (c == 0) return std::nullopt;
      std::size_t col = grid.header_cols > 0 ? std::min(c, grid.header_cols) - 1 : 0;
      return std::make_pair(r, col);
    }
  }
  return std::nullopt;
}

core::TestOutcome check_table_relation(const std::vector<TableGrid>& grids,
                                       const TableRelationPayload& payload,
                                       int max_diffs) {
  core::TestOutcome out;
  if (grids.empty()) {
    out.detail = "no tables found";
    return out;
  }
  std::u32string target = textnorm::normalize(payload.cell).text;
  bool saw_target = false;
  for (const auto& grid : grids) {
    for (std::size_t r = 0; r < grid.rows; ++r) {
      for (std::size_t c = 0; c < grid.cols; ++c) {
        if (!textnorm::within_edit_distance(grid.at(r, c), target, max_diffs)) continue;
        saw_target = true;
        bool all_hold = true;
        for (const auto& [dir, expected] : payload.relations) {
          auto slot = relation_slot(grid, r, c, dir);
          if (!slot) {
            all_hold = false;
            break;
          }
          std::u32string want = textnorm::normalize(expected).text;
          if (!textnorm::within_edit_distance(grid.at(slot->first, slot->second), want,
                                              max_diffs)) {
            all_hold = false;
            break;
          }
        }
        if (all_hold) {
          out.passed = true;
          return out;
        }
      }
    }
  }
  out.detail = saw_target ? "cell \"" + payload.cell + "\" found but no slot satisfies all relations"
                          : "cell \"" + payload.cell + "\" not found in any table";
  return out;
}

core::TestOutcome check_table_relation(std::string_view body,
                                       const TableRelationPayload& payload,
                                       int max_diffs) {
  return check_table_relation(extract_tables(body), payload, max_diffs);
}

}  // namespace ocrcheck::tables
