#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spdca/grid.hpp"

namespace spdca {

/// 3x3 binary stencil, stored row-major as displayed.
struct Template {
  std::array<Cell, 9> grid{};
  std::string label;

  static Template from_rows(std::string_view top, std::string_view mid, std::string_view bottom,
                            std::string label = {}) {
    Template t;
    t.label = std::move(label);
    const std::array<std::string_view, 3> rows{top, mid, bottom};
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) t.grid[r * 3 + c] = rows[r].at(c) == '1' ? 1 : 0;
    return t;
  }

  Cell center() const noexcept { return grid[4]; }

  /// Window value at relative offset (di, dj), each in [-1, 1].
  Cell at(int di, int dj) const noexcept { return grid[static_cast<std::size_t>((di + 1) * 3 + (dj + 1))]; }

  NeighborhoodConfig neighborhood() const noexcept {
    NeighborhoodConfig cfg{};
    for (std::size_t k = 0; k < moore_offsets.size(); ++k) cfg[k] = at(moore_offsets[k].first, moore_offsets[k].second);
    return cfg;
  }

  std::uint16_t code() const noexcept { return neighborhood_code(neighborhood()); }
  std::uint8_t outer() const noexcept { return outer_code(code()); }

  Template transformed(Symmetry s) const {
    Template t;
    t.grid = transform_square(grid, 3, s);
    return t;
  }

  /// Cell-wise equality; labels are ignored.
  bool same_cells(const Template& o) const noexcept { return grid == o.grid; }
};

inline std::array<Cell, 9> window_at(const Pattern& p, Coord c) {
  std::array<Cell, 9> w{};
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) w[static_cast<std::size_t>((di + 1) * 3 + (dj + 1))] = p(c.i + di, c.j + dj);
  return w;
}

inline bool match_except_center(const Pattern& p, Coord c, const Template& t) {
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      if (p(c.i + di, c.j + dj) != t.at(di, dj)) return false;
    }
  return true;
}

inline bool match_full(const Pattern& p, Coord c, const Template& t) {
  return p.at(c) == t.center() && match_except_center(p, c, t);
}

/// Ordered, duplicate-free list of templates.
class TemplateSet {
 public:
  TemplateSet() = default;

  /// Adds t unless a template with the same cells is present. Returns true
  /// when inserted.
  bool add(Template t) {
    if (contains(t)) return false;
    items_.push_back(std::move(t));
    return true;
  }

  bool contains(const Template& t) const {
    return std::any_of(items_.begin(), items_.end(), [&](const Template& x) { return x.same_cells(t); });
  }

  /// True if every member of `other` is in this set.
  bool includes(const TemplateSet& other) const {
    return std::all_of(other.begin(), other.end(), [&](const Template& t) { return contains(t); });
  }

  bool same_members(const TemplateSet& other) const {
    return size() == other.size() && includes(other) && other.includes(*this);
  }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const Template& operator[](std::size_t k) const { return items_[k]; }
  std::vector<Template>::const_iterator begin() const noexcept { return items_.begin(); }
  std::vector<Template>::const_iterator end() const noexcept { return items_.end(); }
  std::span<const Template> items() const noexcept { return items_; }

 private:
  std::vector<Template> items_;
};

enum class BuiltinRule { rule8, rule36, rule52 };

inline std::size_t builtin_size(BuiltinRule r) noexcept {
  switch (r) {
    case BuiltinRule::rule8: return 8;
    case BuiltinRule::rule36: return 36;
    case BuiltinRule::rule52: return 52;
  }
  return 0;
}

namespace detail {

struct TemplateRow {
  const char* name;
  const char* family;
  const char* rows[3];
};

// Point lattice (A-D), domino neighborhoods (E-I), singularity (J, K).
inline constexpr TemplateRow kTemplateTable[52] = {
    {"T0", "A", {"000", "010", "000"}},  {"T1", "B0", {"000", "101", "000"}},
    {"T2", "B1", {"010", "000", "010"}}, {"T3", "C", {"101", "000", "101"}},
    {"T4", "D0", {"101", "000", "010"}}, {"T5", "D1", {"010", "000", "101"}},
    {"T6", "D2", {"001", "100", "001"}}, {"T7", "D3", {"100", "001", "100"}},
    {"T8", "E0", {"000", "110", "000"}}, {"T9", "E1", {"000", "011", "000"}},
    {"T10", "E2", {"010", "010", "000"}}, {"T11", "E3", {"000", "010", "010"}},
    {"T12", "F0", {"110", "000", "110"}}, {"T13", "F1", {"011", "000", "011"}},
    {"T14", "F2", {"101", "101", "000"}}, {"T15", "F3", {"000", "101", "101"}},
    {"T16", "G0", {"110", "000", "010"}}, {"T17", "G1", {"010", "000", "110"}},
    {"T18", "G2", {"011", "000", "010"}}, {"T19", "G3", {"010", "000", "011"}},
    {"T20", "G4", {"001", "101", "000"}}, {"T21", "G5", {"000", "101", "001"}},
    {"T22", "G6", {"100", "101", "000"}}, {"T23", "G7", {"000", "101", "100"}},
    {"T24", "H0", {"110", "000", "101"}}, {"T25", "H1", {"101", "000", "110"}},
    {"T26", "H2", {"011", "000", "101"}}, {"T27", "H3", {"101", "000", "011"}},
    {"T28", "H4", {"101", "001", "100"}}, {"T29", "H5", {"100", "001", "101"}},
    {"T30", "H6", {"101", "100", "001"}}, {"T31", "H7", {"001", "100", "101"}},
    {"T32", "I0", {"110", "000", "011"}}, {"T33", "I1", {"011", "000", "110"}},
    {"T34", "I2", {"001", "101", "100"}}, {"T35", "I3", {"100", "101", "001"}},
    {"T36", "J0", {"110", "000", "100"}}, {"T37", "J1", {"100", "000", "110"}},
    {"T38", "J2", {"011", "000", "001"}}, {"T39", "J3", {"001", "000", "011"}},
    {"T40", "J4", {"101", "001", "000"}}, {"T41", "J5", {"000", "001", "101"}},
    {"T42", "J6", {"101", "100", "000"}}, {"T43", "J7", {"000", "100", "101"}},
    {"T44", "K0", {"010", "000", "001"}}, {"T45", "K1", {"001", "000", "010"}},
    {"T46", "K2", {"010", "000", "100"}}, {"T47", "K3", {"100", "000", "010"}},
    {"T48", "K4", {"000", "001", "100"}}, {"T49", "K5", {"100", "001", "000"}},
    {"T50", "K6", {"000", "100", "001"}}, {"T51", "K7", {"001", "100", "000"}},
};

}  // namespace detail

/// Rule 8 uses T0-T7, Rule 36 T0-T35, Rule 52 all of T0-T51. Labels read
/// "T<k>/<family>".
inline TemplateSet builtin_set(BuiltinRule rule) {
  TemplateSet set;
  for (std::size_t k = 0; k < builtin_size(rule); ++k) {
    const auto& row = detail::kTemplateTable[k];
    set.add(Template::from_rows(row.rows[0], row.rows[1], row.rows[2],
                                std::string(row.name) + "/" + row.family));
  }
  return set;
}

/// Distinct images of t under the eight symmetries, t itself first.
inline std::vector<Template> symmetry_orbit(const Template& t) {
  std::vector<Template> orbit;
  for (Symmetry s : all_symmetries) {
    Template img = t.transformed(s);
    const bool seen = std::any_of(orbit.begin(), orbit.end(), [&](const Template& x) { return x.same_cells(img); });
    if (!seen) orbit.push_back(std::move(img));
  }
  return orbit;
}

/// Gives unlabeled templates the Table label when they are built-in
/// members, "X<k>" otherwise.
inline void assign_labels(std::vector<Template>& ts) {
  const TemplateSet known = builtin_set(BuiltinRule::rule52);
  int extra = 0;
  for (Template& t : ts) {
    if (!t.label.empty()) continue;
    auto it = std::find_if(known.begin(), known.end(), [&](const Template& k) { return k.same_cells(t); });
    t.label = it != known.end() ? it->label : "X" + std::to_string(extra++);
  }
}

/// Adds every missing symmetric image, each orbit right after its first
/// member.
inline TemplateSet complete_symmetry(const TemplateSet& in) {
  std::vector<Template> out;
  auto present = [&](const Template& t) {
    return std::any_of(out.begin(), out.end(), [&](const Template& x) { return x.same_cells(t); });
  };
  for (const Template& t : in) {
    if (!present(t)) out.push_back(t);
    for (Template& img : symmetry_orbit(t))
      if (!present(img)) out.push_back(std::move(img));
  }
  assign_labels(out);
  TemplateSet set;
  for (Template& t : out) set.add(std::move(t));
  return set;
}

inline bool is_symmetry_closed(const TemplateSet& set) {
  for (const Template& t : set)
    for (Symmetry s : all_symmetries)
      if (!set.contains(t.transformed(s))) return false;
  return true;
}

/// Slides a 3x3 window over every torus cell (row-major), keeps each distinct
/// window once and, unless disabled, closes the result under symmetry.
inline TemplateSet extract_templates(const Pattern& p, bool complete = true) {
  std::vector<Template> found;
  const int n = p.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Template t;
      t.grid = window_at(p, {i, j});
      const bool seen = std::any_of(found.begin(), found.end(), [&](const Template& x) { return x.same_cells(t); });
      if (!seen) found.push_back(std::move(t));
    }
  TemplateSet raw;
  assign_labels(found);
  for (Template& t : found) raw.add(std::move(t));
  return complete ? complete_symmetry(raw) : raw;
}

// ---------------------------------------------------------------------------
// Text format: blocks of three '0'/'1' lines separated by blank lines, each
// optionally preceded by a "# label" line.

inline TemplateSet parse_templates(std::string_view text) {
  TemplateSet set;
  std::vector<std::string_view> rows;
  std::string label;
  std::size_t line_no = 0;
  std::size_t block_start = 0;

  auto flush = [&] {
    if (rows.empty()) {
      if (!label.empty()) throw ParseError(line_no, "label without template rows");
      return;
    }
    if (rows.size() != 3)
      throw ParseError(block_start, "template block needs 3 rows, got " + std::to_string(rows.size()));
    set.add(Template::from_rows(rows[0], rows[1], rows[2], label));
    rows.clear();
    label.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush();
    } else if (line.front() == '#') {
      if (!rows.empty()) throw ParseError(line_no, "label inside a template block");
      line.remove_prefix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      label = std::string(line);
    } else {
      if (line.size() != 3) throw ParseError(line_no, "template rows must have 3 characters");
      for (char ch : line)
        if (ch != '0' && ch != '1') throw ParseError(line_no, std::string("illegal character '") + ch + "'");
      if (rows.empty()) block_start = line_no;
      rows.push_back(line);
    }
    if (eol == text.size()) break;
  }
  flush();

  // Fill in missing labels the same way extraction does.
  std::vector<Template> items(set.begin(), set.end());
  assign_labels(items);
  TemplateSet labeled;
  for (Template& t : items) labeled.add(std::move(t));
  return labeled;
}

inline std::string serialize_templates(const TemplateSet& set) {
  std::string out;
  bool first = true;
  for (const Template& t : set) {
    if (!first) out += '\n';
    first = false;
    if (!t.label.empty()) out += "# " + t.label + "\n";
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out.push_back(t.grid[static_cast<std::size_t>(r * 3 + c)] ? '1' : '0');
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace spdca
