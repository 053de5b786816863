#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spdca/analysis.hpp"
#include "spdca/ca.hpp"
#include "spdca/templates.hpp"

using namespace spdca;

namespace {

oracle::Rows rows_of(const Template& t) {
  oracle::Rows r(3, "000");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = t.grid[static_cast<std::size_t>(i * 3 + j)] ? '1' : '0';
  return r;
}

TemplateSet from_list(std::initializer_list<Template> ts) {
  TemplateSet s;
  for (const Template& t : ts) s.add(t);
  return s;
}

// The 3x3 window whose 9-bit code is `code`, as a 3x3 pattern centered at (1,1).
Pattern window_pattern(unsigned code) {
  Pattern p(3);
  for (std::size_t k = 0; k < 9; ++k) {
    const auto [di, dj] = moore_offsets[k];
    p.set(1 + di, 1 + dj, (code >> k) & 1u);
  }
  return p;
}

}  // namespace

TEST(Builtin, Sizes) {
  EXPECT_EQ(builtin_set(BuiltinRule::rule8).size(), 8u);
  EXPECT_EQ(builtin_set(BuiltinRule::rule36).size(), 36u);
  EXPECT_EQ(builtin_set(BuiltinRule::rule52).size(), 52u);
}

TEST(Builtin, SpotChecksAgainstTable) {
  const TemplateSet all = builtin_set(BuiltinRule::rule52);
  EXPECT_TRUE(all[0].same_cells(Template::from_rows("000", "010", "000")));
  EXPECT_EQ(all[0].label, "T0/A");
  EXPECT_TRUE(all[1].same_cells(Template::from_rows("000", "101", "000")));
  EXPECT_TRUE(all[3].same_cells(Template::from_rows("101", "000", "101")));
  EXPECT_TRUE(all[4].same_cells(Template::from_rows("101", "000", "010")));
  EXPECT_TRUE(all[36].same_cells(Template::from_rows("110", "000", "100")));
  EXPECT_TRUE(all[44].same_cells(Template::from_rows("010", "000", "001")));
  EXPECT_EQ(all[44].label, "T44/K0");
  EXPECT_TRUE(all[51].same_cells(Template::from_rows("001", "100", "000")));
  EXPECT_EQ(all[51].label, "T51/K7");
}

TEST(Builtin, PrefixSubsets) {
  const TemplateSet r8 = builtin_set(BuiltinRule::rule8);
  const TemplateSet r36 = builtin_set(BuiltinRule::rule36);
  const TemplateSet r52 = builtin_set(BuiltinRule::rule52);
  EXPECT_TRUE(r36.includes(r8));
  EXPECT_TRUE(r52.includes(r36));
  EXPECT_FALSE(r8.includes(r36));
  for (std::size_t k = 0; k < r36.size(); ++k) EXPECT_TRUE(r36[k].same_cells(r52[k]));
}

TEST(Builtin, SymmetryClosed) {
  for (BuiltinRule r : {BuiltinRule::rule8, BuiltinRule::rule36, BuiltinRule::rule52}) {
    const TemplateSet s = builtin_set(r);
    EXPECT_TRUE(is_symmetry_closed(s));
    const TemplateSet c = complete_symmetry(s);
    EXPECT_EQ(c.size(), s.size());
    EXPECT_TRUE(c.same_members(s));
  }
}

TEST(Builtin, NoConflictingOuterRings) {
  for (BuiltinRule r : {BuiltinRule::rule8, BuiltinRule::rule36, BuiltinRule::rule52})
    EXPECT_FALSE(RuleTable(builtin_set(r)).ambiguous());
}

TEST(Builtin, DuplicateFree) {
  const TemplateSet all = builtin_set(BuiltinRule::rule52);
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) EXPECT_FALSE(all[a].same_cells(all[b])) << a << " " << b;
}

TEST(TemplateSet, AddDeduplicatesByCells) {
  TemplateSet s;
  EXPECT_TRUE(s.add(Template::from_rows("000", "010", "000", "a")));
  EXPECT_FALSE(s.add(Template::from_rows("000", "010", "000", "b")));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].label, "a");
}

TEST(Orbit, Sizes) {
  const TemplateSet all = builtin_set(BuiltinRule::rule52);
  EXPECT_EQ(symmetry_orbit(all[0]).size(), 1u);
  for (const Template& t : all) EXPECT_EQ(8 % symmetry_orbit(t).size(), 0u);
  EXPECT_TRUE(symmetry_orbit(all[7])[0].same_cells(all[7]));
}

TEST(Orbit, T1ContainsT2) {
  const TemplateSet all = builtin_set(BuiltinRule::rule8);
  const auto orbit = symmetry_orbit(all[1]);
  EXPECT_EQ(orbit.size(), 2u);
  EXPECT_TRUE(all[1].transformed(Symmetry::rotate90).same_cells(all[2]));
}

TEST(Orbit, T4ClassIsT4ToT7) {
  const TemplateSet all = builtin_set(BuiltinRule::rule8);
  TemplateSet orbit;
  for (const Template& t : symmetry_orbit(all[4])) orbit.add(t);
  EXPECT_TRUE(orbit.same_members(from_list({all[4], all[5], all[6], all[7]})));
}

TEST(Extract, AllZero) {
  const TemplateSet s = extract_templates(Pattern(5));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].same_cells(Template::from_rows("000", "000", "000")));
  EXPECT_EQ(s[0].label, "X0");
}

TEST(Extract, PointLatticeGivesT0ToT3) {
  const TemplateSet all = builtin_set(BuiltinRule::rule8);
  const TemplateSet expected = complete_symmetry(from_list({all[0], all[1], all[2], all[3]}));
  const TemplateSet got = extract_templates(oracle::pattern_of(oracle::point_lattice(6, 6)));
  EXPECT_TRUE(got.same_members(expected));
  EXPECT_EQ(got.size(), 4u);
  for (const Template& t : got) EXPECT_EQ(t.label.substr(0, 1), "T");
}

TEST(Extract, ShiftedLatticeUsesT4Family) {
  const TemplateSet got = extract_templates(oracle::pattern_of(oracle::shifted_row_lattice(6)), false);
  const TemplateSet all = builtin_set(BuiltinRule::rule8);
  EXPECT_TRUE(all.includes(got));
  EXPECT_TRUE(got.contains(all[4]) || got.contains(all[5]));
  EXPECT_FALSE(got.contains(all[6]));
}

TEST(Extract, ConstructedOddPatternsWithinRule52) {
  const TemplateSet r52 = builtin_set(BuiltinRule::rule52);
  for (int n = 5; n <= 15; n += 2) EXPECT_TRUE(r52.includes(extract_templates(construct_optimal_odd(n)))) << n;
}

TEST(Extract, ClosedAndInvariantUnderSymmetry) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const Pattern p = oracle::random_pattern(6, seed, 0.3);
    const TemplateSet base = extract_templates(p);
    EXPECT_TRUE(is_symmetry_closed(base));
    for (Symmetry s : all_symmetries) EXPECT_TRUE(extract_templates(shift(transform(p, s), 2, 1)).same_members(base));
  }
}

TEST(Extract, NoCompleteKeepsRawWindows) {
  const Pattern p = construct_optimal_odd(7);
  const TemplateSet raw = extract_templates(p, false);
  const auto rows = oracle::rows_of(p);
  for (const Template& t : raw) {
    bool seen = false;
    for (int i = 0; i < 7 && !seen; ++i)
      for (int j = 0; j < 7 && !seen; ++j) seen = oracle::window(rows, i, j) == rows_of(t);
    EXPECT_TRUE(seen);
  }
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      Template w;
      w.grid = window_at(p, {i, j});
      EXPECT_TRUE(raw.contains(w));
    }
  EXPECT_TRUE(extract_templates(p).includes(raw));
}

TEST(Match, PointDefectorMatchesT0) {
  Pattern p(5);
  p.set(2, 2, 1);
  const Template t0 = builtin_set(BuiltinRule::rule8)[0];
  EXPECT_TRUE(match_full(p, {2, 2}, t0));
  EXPECT_TRUE(match_except_center(p, {2, 2}, t0));
}

TEST(Match, AllZeroMatchesT0ExceptCenter) {
  const Pattern p(5);
  const Template t0 = builtin_set(BuiltinRule::rule8)[0];
  EXPECT_TRUE(match_except_center(p, {1, 3}, t0));
  EXPECT_FALSE(match_full(p, {1, 3}, t0));
}

TEST(Match, EveryLatticeCellMatchesRule8) {
  const Pattern p = oracle::pattern_of(oracle::point_lattice(6, 6));
  const TemplateSet r8 = builtin_set(BuiltinRule::rule8);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      bool any = false;
      for (const Template& t : r8) any = any || match_full(p, {i, j}, t);
      EXPECT_TRUE(any) << i << "," << j;
    }
}

// All 512 windows against every built-in template: the library agrees with a
// string comparison, and full = outer && center.
TEST(Match, ExhaustiveConsistency) {
  const TemplateSet all = builtin_set(BuiltinRule::rule52);
  const RuleTable table(all);
  for (unsigned code = 0; code < 512; ++code) {
    const Pattern p = window_pattern(code);
    const auto rows = oracle::rows_of(p);
    const auto win = oracle::window(rows, 1, 1);
    std::vector<std::uint16_t> expected_hits;
    for (std::size_t q = 0; q < all.size(); ++q) {
      const Template& t = all[q];
      const bool outer = oracle::outer_equal(win, rows_of(t));
      const bool full = outer && win[1][1] == (t.center() ? '1' : '0');
      EXPECT_EQ(match_except_center(p, {1, 1}, t), outer);
      EXPECT_EQ(match_full(p, {1, 1}, t), full);
      EXPECT_EQ(match_full(p, {1, 1}, t), match_except_center(p, {1, 1}, t) && p(1, 1) == t.center());
      if (outer) expected_hits.push_back(static_cast<std::uint16_t>(q));
    }
    const auto hits = table.matches(outer_code(static_cast<std::uint16_t>(code)));
    EXPECT_EQ(std::vector<std::uint16_t>(hits.begin(), hits.end()), expected_hits);
  }
}

TEST(Match, TemplateCodeMatchesWindow) {
  for (const Template& t : builtin_set(BuiltinRule::rule52)) {
    const Pattern p = window_pattern(t.code());
    Template w;
    w.grid = window_at(p, {1, 1});
    EXPECT_TRUE(w.same_cells(t));
  }
}

TEST(TemplateText, RoundTrip) {
  const TemplateSet s = builtin_set(BuiltinRule::rule36);
  const TemplateSet back = parse_templates(serialize_templates(s));
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_TRUE(back[k].same_cells(s[k]));
    EXPECT_EQ(back[k].label, s[k].label);
  }
}

TEST(TemplateText, UnlabeledBlocksGetLabels) {
  const TemplateSet s = parse_templates("000\n010\n000\n\n111\n111\n111\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].label, "T0/A");
  EXPECT_EQ(s[1].label, "X0");
}

TEST(TemplateText, Errors) {
  EXPECT_THROW(parse_templates("000\n010\n"), ParseError);
  EXPECT_THROW(parse_templates("000\n0a0\n000\n"), ParseError);
  EXPECT_THROW(parse_templates("0000\n010\n000\n"), ParseError);
  try {
    parse_templates("000\n010\n000\n\n000\n01\n000\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u);
  }
  EXPECT_TRUE(parse_templates("").empty());
}
