#pragma once

// Naive reference implementations for the tests. They work on plain strings
// and nested loops and share no code with the library beyond the Pattern type.

#include <random>
#include <string>
#include <vector>

#include "spdca/grid.hpp"

namespace oracle {

using Rows = std::vector<std::string>;

inline int wrap(int x, int n) { return ((x % n) + n) % n; }

inline Rows rows_of(const spdca::Pattern& p) {
  Rows r(static_cast<std::size_t>(p.size()), std::string(static_cast<std::size_t>(p.size()), '0'));
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j) r[i][j] = p(i, j) ? '1' : '0';
  return r;
}

inline spdca::Pattern pattern_of(const Rows& r) {
  const int n = static_cast<int>(r.size());
  spdca::Pattern p(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.set(i, j, r[i][j] == '1' ? 1 : 0);
  return p;
}

// g(self, other) for the default game: C/C 1, C/D 0, D/C 3, D/D 0.
inline double game(char self, char other, double T = 3, double R = 1, double P = 0, double S = 0) {
  if (self == '0') return other == '0' ? R : S;
  return other == '0' ? T : P;
}

inline double cell_payoff(const Rows& r, int i, int j, bool self_play = true) {
  const int n = static_cast<int>(r.size());
  double sum = 0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0 && !self_play) continue;
      sum += game(r[i][j], r[wrap(i + di, n)][wrap(j + dj, n)]);
    }
  return sum;
}

inline double tps(const Rows& r, bool self_play = true) {
  double sum = 0;
  for (int i = 0; i < static_cast<int>(r.size()); ++i)
    for (int j = 0; j < static_cast<int>(r.size()); ++j) sum += cell_payoff(r, i, j, self_play);
  return sum;
}

inline double tps(const spdca::Pattern& p) { return tps(rows_of(p)); }

// 3x3 window at (i, j) as three strings.
inline Rows window(const Rows& r, int i, int j) {
  const int n = static_cast<int>(r.size());
  Rows w(3, "000");
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) w[di + 1][dj + 1] = r[wrap(i + di, n)][wrap(j + dj, n)];
  return w;
}

inline bool outer_equal(const Rows& a, const Rows& b) {
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (!(x == 1 && y == 1) && a[x][y] != b[x][y]) return false;
  return true;
}

// Ones at (i, j) for i, j both even and below limit (limit = n for the plain
// lattice, n - 1 for the point-filled start).
inline Rows point_lattice(int n, int limit) {
  Rows r(n, std::string(n, '0'));
  for (int i = 0; i < limit; i += 2)
    for (int j = 0; j < limit; j += 2) r[i][j] = '1';
  return r;
}

// Point rows on even lines, every other one shifted right by one column.
inline Rows shifted_row_lattice(int n) {
  Rows r(n, std::string(n, '0'));
  for (int i = 0; i < n; i += 2)
    for (int j = (i / 2) % 2; j < n; j += 2) r[i][j] = '1';
  return r;
}

inline Rows transpose(const Rows& r) {
  Rows t = r;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) t[i][j] = r[j][i];
  return t;
}

inline spdca::Pattern random_pattern(int n, std::uint32_t seed, double density = 0.5) {
  std::mt19937 gen(seed);
  std::bernoulli_distribution bit(density);
  spdca::Pattern p(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.set(i, j, bit(gen) ? 1 : 0);
  return p;
}

inline int hamming(const spdca::Pattern& a, const spdca::Pattern& b) {
  int d = 0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) d += a(i, j) != b(i, j);
  return d;
}

}  // namespace oracle
