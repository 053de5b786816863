#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spdca {

using Cell = std::uint8_t;

/// Row/column position on the torus. Build it through Pattern::wrap() to get
/// indices reduced modulo n.
struct Coord {
  int i = 0;
  int j = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

constexpr int wrap_index(int v, int n) noexcept {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

/// Relative positions of the 3x3 Moore window: the center first, then the
/// eight outer cells in row-major order. Every neighborhood-indexed value in
/// the library (utility, template codes, hit tables) uses this order.
inline constexpr std::array<std::pair<int, int>, 9> moore_offsets{{
    {0, 0},
    {-1, -1}, {-1, 0}, {-1, 1},
    {0, -1},           {0, 1},
    {1, -1},  {1, 0},  {1, 1},
}};

/// Values of a Moore window in moore_offsets order.
using NeighborhoodConfig = std::array<Cell, 9>;

/// 9-bit code of a neighborhood: bit k holds values[k]. Bit 0 is the
/// center; bits 1..8 are the outer ring.
constexpr std::uint16_t neighborhood_code(const NeighborhoodConfig& cfg) noexcept {
  std::uint16_t code = 0;
  for (std::size_t k = 0; k < cfg.size(); ++k) code |= static_cast<std::uint16_t>(cfg[k] & 1u) << k;
  return code;
}

constexpr std::uint8_t outer_code(std::uint16_t code) noexcept {
  return static_cast<std::uint8_t>(code >> 1);
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// n x n binary field with cyclic boundaries.
class Pattern {
 public:
  static constexpr int min_size = 3;

  explicit Pattern(int n) : n_(check_size(n)), cells_(static_cast<std::size_t>(n) * n, 0) {}

  Pattern(int n, std::vector<Cell> cells) : n_(check_size(n)), cells_(std::move(cells)) {
    if (cells_.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("pattern needs n*n cells");
    for (Cell c : cells_)
      if (c > 1) throw std::invalid_argument("pattern cells must be 0 or 1");
  }

  int size() const noexcept { return n_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  Coord wrap(int i, int j) const noexcept { return {wrap_index(i, n_), wrap_index(j, n_)}; }

  /// Toroidal read; any integer indices are accepted.
  Cell operator()(int i, int j) const noexcept {
    return cells_[index(wrap_index(i, n_), wrap_index(j, n_))];
  }
  Cell at(Coord c) const noexcept { return (*this)(c.i, c.j); }

  void set(int i, int j, Cell v) { cells_[index(wrap_index(i, n_), wrap_index(j, n_))] = v ? 1 : 0; }
  void set(Coord c, Cell v) { set(c.i, c.j, v); }
  void flip(Coord c) { set(c, at(c) ? 0 : 1); }

  std::span<const Cell> cells() const noexcept { return cells_; }

  int ones() const noexcept {
    return static_cast<int>(std::count(cells_.begin(), cells_.end(), Cell{1}));
  }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.cells_ <=> b.cells_;
  }

 private:
  static int check_size(int n) {
    if (n < min_size) throw std::invalid_argument("pattern side must be >= 3, got " + std::to_string(n));
    return n;
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<Cell> cells_;
};

inline NeighborhoodConfig moore_neighborhood(const Pattern& p, Coord c) noexcept {
  NeighborhoodConfig cfg{};
  for (std::size_t k = 0; k < moore_offsets.size(); ++k)
    cfg[k] = p(c.i + moore_offsets[k].first, c.j + moore_offsets[k].second);
  return cfg;
}

// ---------------------------------------------------------------------------
// Symmetries

/// The eight rotations and reflections of the square.
enum class Symmetry : std::uint8_t {
  identity,
  rotate90,   // clockwise
  rotate180,
  rotate270,
  reflect_horizontal,  // mirror against the horizontal center line
  reflect_vertical,    // mirror against the vertical center line
  transpose,
  anti_transpose,
};

inline constexpr std::array<Symmetry, 8> all_symmetries{
    Symmetry::identity,           Symmetry::rotate90,         Symmetry::rotate180,
    Symmetry::rotate270,          Symmetry::reflect_horizontal, Symmetry::reflect_vertical,
    Symmetry::transpose,          Symmetry::anti_transpose,
};

constexpr Symmetry inverse(Symmetry s) noexcept {
  switch (s) {
    case Symmetry::rotate90: return Symmetry::rotate270;
    case Symmetry::rotate270: return Symmetry::rotate90;
    default: return s;
  }
}

/// Source position read by destination (i, j) when applying s to an n x n
/// square.
constexpr std::pair<int, int> symmetry_source(Symmetry s, int n, int i, int j) noexcept {
  const int m = n - 1;
  switch (s) {
    case Symmetry::identity: return {i, j};
    case Symmetry::rotate90: return {m - j, i};
    case Symmetry::rotate180: return {m - i, m - j};
    case Symmetry::rotate270: return {j, m - i};
    case Symmetry::reflect_horizontal: return {m - i, j};
    case Symmetry::reflect_vertical: return {i, m - j};
    case Symmetry::transpose: return {j, i};
    case Symmetry::anti_transpose: return {m - j, m - i};
  }
  return {i, j};
}

/// Applies s to any square row-major container of side n.
template <typename Square>
Square transform_square(const Square& src, int n, Symmetry s) {
  Square dst = src;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [si, sj] = symmetry_source(s, n, i, j);
      dst[static_cast<std::size_t>(i * n + j)] = src[static_cast<std::size_t>(si * n + sj)];
    }
  return dst;
}

inline Pattern transform(const Pattern& p, Symmetry s) {
  const int n = p.size();
  std::vector<Cell> cells(p.cells().begin(), p.cells().end());
  return Pattern(n, transform_square(cells, n, s));
}

/// Cyclic translation: the value at (i, j) moves to (i + di, j + dj).
inline Pattern shift(const Pattern& p, int di, int dj) {
  const int n = p.size();
  Pattern out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.set(i + di, j + dj, p(i, j));
  return out;
}

/// Smallest cell vector over all 8 n^2 shift/rotation/reflection images.
/// Two patterns are equivalent iff their canonical forms are equal.
inline Pattern canonical(const Pattern& p) {
  const int n = p.size();
  Pattern best = p;
  for (Symmetry s : all_symmetries) {
    const Pattern t = transform(p, s);
    for (int di = 0; di < n; ++di)
      for (int dj = 0; dj < n; ++dj) {
        Pattern c = shift(t, di, dj);
        if (c < best) best = std::move(c);
      }
  }
  return best;
}

inline bool equivalent(const Pattern& a, const Pattern& b) {
  return a.size() == b.size() && a.ones() == b.ones() && canonical(a) == canonical(b);
}

// ---------------------------------------------------------------------------
// Text format: one row per line over {'0','1'}, optional trailing newline.

inline Pattern parse_pattern(std::string_view text) {
  std::vector<std::string_view> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    rows.push_back(line);
    pos = eol + 1;
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();

  if (rows.empty()) throw ParseError(1, "empty pattern");
  const std::size_t width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw ParseError(r + 1, "ragged line: expected " + std::to_string(width) + " characters, got " +
                                  std::to_string(rows[r].size()));
    for (char ch : rows[r])
      if (ch != '0' && ch != '1') throw ParseError(r + 1, std::string("illegal character '") + ch + "'");
  }
  if (rows.size() < static_cast<std::size_t>(Pattern::min_size) || width < static_cast<std::size_t>(Pattern::min_size))
    throw ParseError(rows.size(), "pattern must be at least 3x3 (n < 3)");
  if (rows.size() != width)
    throw ParseError(rows.size(), "pattern must be square: " + std::to_string(rows.size()) + " rows of width " +
                                      std::to_string(width));

  const int n = static_cast<int>(width);
  std::vector<Cell> cells;
  cells.reserve(width * width);
  for (std::string_view row : rows)
    for (char ch : row) cells.push_back(ch == '1' ? 1 : 0);
  return Pattern(n, std::move(cells));
}

inline std::string serialize_pattern(const Pattern& p) {
  const int n = p.size();
  std::string out;
  out.reserve(static_cast<std::size_t>(n) * (n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.push_back(p(i, j) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

}  // namespace spdca
