#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdca/analysis.hpp"
#include "spdca/grid.hpp"
#include "spdca/payoff.hpp"

namespace spdca {

struct Rgb {
  std::uint8_t r, g, b;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kRed{255, 0, 0};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderOptions {
  int scale = 1;
  bool quad = false;               // tile the torus 2x2
  bool mark_singularities = false; // paint maximal 2x2 zero blocks red
};

/// 0-cells white, 1-cells black, singularity blocks red when requested.
inline Image render(const Pattern& p, const RenderOptions& opt = {}) {
  if (opt.scale < 1) throw std::invalid_argument("render scale must be >= 1");
  const int n = p.size();
  const int tiles = opt.quad ? 2 : 1;
  const int cells = n * tiles;

  std::vector<Rgb> colors(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) colors[static_cast<std::size_t>(i * n + j)] = p(i, j) ? kBlack : kWhite;
  if (opt.mark_singularities)
    for (Coord c : detect_singularities(p))
      for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
          colors[static_cast<std::size_t>(wrap_index(c.i + di, n) * n + wrap_index(c.j + dj, n))] = kRed;

  Image img;
  img.width = img.height = cells * opt.scale;
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const int i = (y / opt.scale) % n, j = (x / opt.scale) % n;
      img.pixels[static_cast<std::size_t>(y) * img.width + x] = colors[static_cast<std::size_t>(i * n + j)];
    }
  return img;
}

/// Binary PPM (P6, maxval 255).
inline std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size() * 3);
  for (const Rgb& px : img.pixels) {
    out.push_back(static_cast<char>(px.r));
    out.push_back(static_cast<char>(px.g));
    out.push_back(static_cast<char>(px.b));
  }
  return out;
}

inline void write_ppm(const std::string& path, const Image& img) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  const std::string data = encode_ppm(img);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

/// Per-cell total payoffs, row-major.
inline std::vector<double> payoff_map(const Pattern& p, const PayoffParams& params = {}) {
  const int n = p.size();
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = cell_total_payoff(p, {i, j}, params);
  return out;
}

/// Shortest decimal that reads back as v; integers print without a point.
inline std::string format_number(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string payoff_map_csv(const Pattern& p, const PayoffParams& params = {}) {
  const int n = p.size();
  const auto values = payoff_map(p, params);
  std::string out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out.push_back(',');
      out += format_number(values[static_cast<std::size_t>(i * n + j)]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace spdca
