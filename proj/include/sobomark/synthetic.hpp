#pragma once

// Deterministic test covers and a balanced 64x64 watermark.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/image.hpp"

namespace sobomark {

namespace synth_detail {

// Smoothly interpolated lattice noise in [0, 1].
class ValueNoise {
 public:
  ValueNoise(int cells, std::mt19937_64& rng) : n_(cells + 2), v_(n_ * n_) {
    for (double& x : v_) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

  double at(double u, double v) const {
    const int i = static_cast<int>(u), j = static_cast<int>(v);
    const double fu = smooth(u - i), fv = smooth(v - j);
    auto g = [&](int a, int b) { return v_[static_cast<size_t>(a) * n_ + b]; };
    return (1 - fu) * ((1 - fv) * g(i, j) + fv * g(i, j + 1)) +
           fu * ((1 - fv) * g(i + 1, j) + fv * g(i + 1, j + 1));
  }

 private:
  static double smooth(double t) { return t * t * (3 - 2 * t); }
  int n_;
  std::vector<double> v_;
};

inline std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace synth_detail

inline const std::vector<std::string>& synthetic_cover_names() {
  static const std::vector<std::string> names = {"gradient", "waves", "clouds", "tiles", "mosaic"};
  return names;
}

/// RGB cover number `which` (0-based index into synthetic_cover_names()).
inline Image synthetic_cover(int which, int size = 512, std::uint64_t seed = 1) {
  using synth_detail::clamp_byte;
  if (which < 0 || which >= static_cast<int>(synthetic_cover_names().size()))
    throw ParameterError("no synthetic cover number " + std::to_string(which));
  std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(which));
  std::normal_distribution<double> grain(0.0, 1.0);
  Image img(size, size, 3);
  const double s = size;
  const double pi = std::numbers::pi;

  std::vector<synth_detail::ValueNoise> octaves;
  for (int o = 0; o < 5; ++o) octaves.emplace_back(4 << o, rng);
  auto fractal = [&](double r, double c, int first) {
    double acc = 0.0, amp = 1.0, norm = 0.0;
    for (int o = first; o < 5; ++o) {
      const double cells = 4 << o;
      acc += amp * octaves[o].at(r / s * cells, c / s * cells);
      norm += amp;
      amp *= 0.55;
    }
    return acc / norm;
  };

  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      double rgb[3];
      const double y = r / s, x = c / s;
      switch (which) {
        case 0:
          rgb[0] = 40 + 170 * x;
          rgb[1] = 60 + 140 * y;
          rgb[2] = 200 - 120 * (x + y) / 2;
          for (double& v : rgb) v += 3 * grain(rng);
          break;
        case 1: {
          const double w = std::sin(2 * pi * (6 * x + 2 * y)) * std::cos(2 * pi * 5 * y);
          rgb[0] = 128 + 70 * w;
          rgb[1] = 120 + 50 * std::sin(2 * pi * 9 * x * y);
          rgb[2] = 110 + 60 * std::cos(2 * pi * (3 * x - 4 * y));
          for (double& v : rgb) v += 4 * grain(rng);
          break;
        }
        case 2: {
          const double f = fractal(r, c, 0);
          rgb[0] = 30 + 200 * f;
          rgb[1] = 50 + 170 * fractal(c, r, 1);
          rgb[2] = 90 + 140 * f * f;
          for (double& v : rgb) v += 2 * grain(rng);
          break;
        }
        case 3: {
          const bool on = ((r / 64) + (c / 64)) % 2 == 0;
          const double base = on ? 190 : 70;
          const double f = fractal(r, c, 2);
          rgb[0] = base + 40 * (f - 0.5);
          rgb[1] = base * 0.8 + 50 * (f - 0.5);
          rgb[2] = 255 - base + 30 * (f - 0.5);
          for (double& v : rgb) v += 6 * grain(rng);
          break;
        }
        default: {
          const double f = fractal(r, c, 1);
          const double cell = octaves[1].at(y * 8, x * 8);
          rgb[0] = 255 * cell;
          rgb[1] = 20 + 210 * f;
          rgb[2] = 128 + 127 * std::sin(2 * pi * (cell + 3 * f));
          for (double& v : rgb) v += 5 * grain(rng);
          break;
        }
      }
      for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = clamp_byte(rgb[ch]);
    }
  return img;
}

/// 64x64 pattern with exactly half of the bits set: a checkerboard of 8x8
/// cells with a disc inverted in the middle.
inline BitMatrix synthetic_watermark() {
  BitMatrix w(64, 64);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) {
      const bool cell = ((r / 8) + (c / 8)) % 2 == 0;
      const double dr = r - 31.5, dc = c - 31.5;
      const bool disc = dr * dr + dc * dc < 20.0 * 20.0;
      w.at(r, c) = static_cast<std::uint8_t>(cell != disc);
    }
  return w;
}

}  // namespace sobomark
