#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sobomark/errors.hpp"

namespace sobomark {

/// 8-bit image, channels interleaved (gray = 1, RGB = 3).
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int h, int w, int c, std::uint8_t fill = 0)
      : height(h), width(w), channels(c), data(static_cast<size_t>(h) * w * c, fill) {
    if (h <= 0 || w <= 0 || (c != 1 && c != 3))
      throw FormatError("unsupported image shape " + std::to_string(h) + "x" +
                        std::to_string(w) + "x" + std::to_string(c));
  }

  std::uint8_t& at(int r, int c, int ch) {
    return data[(static_cast<size_t>(r) * width + c) * channels + ch];
  }
  std::uint8_t at(int r, int c, int ch) const {
    return data[(static_cast<size_t>(r) * width + c) * channels + ch];
  }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
  bool operator==(const Image& o) const { return same_shape(o) && data == o.data; }
};

/// Binary matrix stored row-major, one byte per bit.
struct BitMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;

  BitMatrix() = default;
  BitMatrix(int r, int c, std::uint8_t fill = 0)
      : rows(r), cols(c), bits(static_cast<size_t>(r) * c, fill) {}

  std::uint8_t& at(int r, int c) { return bits[static_cast<size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return bits[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return bits.size(); }

  bool operator==(const BitMatrix& o) const {
    return rows == o.rows && cols == o.cols && bits == o.bits;
  }
};

}  // namespace sobomark
