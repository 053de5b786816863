#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "spdca/analysis.hpp"
#include "spdca/render.hpp"

using namespace spdca;

namespace {

int count_color(const Image& img, Rgb c) {
  int k = 0;
  for (const Rgb& px : img.pixels) k += px == c;
  return k;
}

}  // namespace

TEST(Render, PointPatternScaleOne) {
  const Image img = render(parse_pattern("000\n010\n000\n"));
  EXPECT_EQ(img.width, 3);
  EXPECT_EQ(img.height, 3);
  ASSERT_EQ(img.pixels.size(), 9u);
  EXPECT_EQ(img.at(1, 1), kBlack);
  EXPECT_EQ(count_color(img, kWhite), 8);
}

TEST(Render, ScaleMultipliesPixels) {
  const Pattern p = optimal_5x5();
  const Image img = render(p, {.scale = 4});
  EXPECT_EQ(img.width, 20);
  EXPECT_EQ(count_color(img, kBlack), 8 * 16);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) EXPECT_EQ(img.at(x, y), p(y / 4, x / 4) ? kBlack : kWhite);
  EXPECT_THROW(render(p, {.scale = 0}), std::invalid_argument);
}

TEST(Render, QuadTilesTwoByTwo) {
  const Pattern p = optimal_5x5();
  const Image img = render(p, {.quad = true});
  EXPECT_EQ(img.width, 10);
  EXPECT_EQ(img.height, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) EXPECT_EQ(img.at(x, y), img.at(x % 5, y % 5));
  EXPECT_EQ(count_color(img, kBlack), 4 * 8);
}

TEST(Render, MarksTheSingularity) {
  const Pattern p = optimal_5x5();
  const auto blocks = detect_singularities(p);
  ASSERT_EQ(blocks.size(), 1u);
  const Image img = render(p, {.mark_singularities = true});
  EXPECT_EQ(count_color(img, kRed), 4);
  const Coord c = blocks[0];
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj) EXPECT_EQ(img.at((c.j + dj) % 5, (c.i + di) % 5), kRed);
  EXPECT_EQ(count_color(render(oracle::pattern_of(oracle::point_lattice(6, 6)), {.mark_singularities = true}), kRed),
            0);
}

TEST(Ppm, HeaderAndBytes) {
  const Image img = render(parse_pattern("100\n000\n000\n"));
  const std::string data = encode_ppm(img);
  const std::string header = "P6\n3 3\n255\n";
  ASSERT_EQ(data.size(), header.size() + 27);
  EXPECT_EQ(data.substr(0, header.size()), header);
  EXPECT_EQ(static_cast<unsigned char>(data[header.size()]), 0);
  EXPECT_EQ(static_cast<unsigned char>(data[header.size() + 3]), 255);
}

TEST(Ppm, WriteAndUnwritablePath) {
  const auto dir = std::filesystem::temp_directory_path() / "spdca_render_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "img.ppm").string();
  const Image img = render(optimal_5x5(), {.scale = 2});
  write_ppm(path, img);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), encode_ppm(img));

  const std::string bad = (dir / "missing" / "x.ppm").string();
  try {
    write_ppm(bad, img);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(PayoffMap, AllZero) {
  const std::string csv = payoff_map_csv(Pattern(6));
  std::string row = "9,9,9,9,9,9\n";
  std::string expected;
  for (int k = 0; k < 6; ++k) expected += row;
  EXPECT_EQ(csv, expected);
}

TEST(PayoffMap, SixBySixOptimum) {
  const Pattern p = oracle::pattern_of(oracle::point_lattice(6, 6));
  const auto map = payoff_map(p);
  double sum = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double v = map[static_cast<std::size_t>(i * 6 + j)];
      sum += v;
      if (p(i, j)) {
        EXPECT_EQ(v, 24.0);
      } else {
        EXPECT_TRUE(v == 5 || v == 6 || v == 7) << v;
      }
    }
  EXPECT_EQ(sum, 387.0);
}

TEST(PayoffMap, FiveByFiveDefectorsScore21) {
  const Pattern p = optimal_5x5();
  const auto map = payoff_map(p);
  double sum = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      sum += map[static_cast<std::size_t>(i * 5 + j)];
      if (p(i, j)) {
        EXPECT_EQ(map[static_cast<std::size_t>(i * 5 + j)], 21.0);
      }
    }
  EXPECT_EQ(sum, 265.0);
}

TEST(PayoffMap, FormatsNonIntegers) {
  EXPECT_EQ(format_number(24), "24");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-3), "-3");
}
