#pragma once

// Lossless image and watermark file formats: PNG (libpng), BMP (8/24-bit),
// binary/ASCII PNM, and the raw 512-byte packed watermark.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/image.hpp"

namespace sobomark {

namespace io_detail {

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path);
}

inline std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

inline std::uint32_t le32(const std::uint8_t* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline void put32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}
inline void put16(std::vector<std::uint8_t>& v, std::uint16_t x) {
  v.push_back(static_cast<std::uint8_t>(x));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
}

// -- PNG ----------------------------------------------------------------------

inline Image decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
    throw FormatError(std::string("PNG: ") + img.message);
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image out(static_cast<int>(img.height), static_cast<int>(img.width), color ? 3 : 1);
  if (!png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr)) {
    png_image_free(&img);
    throw FormatError(std::string("PNG: ") + img.message);
  }
  return out;
}

inline void write_png(const std::string& path, const Image& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data.data(), 0, nullptr))
    throw FormatError(std::string("PNG: ") + img.message);
}

// -- BMP ----------------------------------------------------------------------

inline Image decode_bmp(const std::vector<std::uint8_t>& b) {
  if (b.size() < 54) throw FormatError("BMP: truncated header");
  const std::uint32_t offset = le32(&b[10]);
  const std::uint32_t header = le32(&b[14]);
  const std::int32_t w = static_cast<std::int32_t>(le32(&b[18]));
  std::int32_t h = static_cast<std::int32_t>(le32(&b[22]));
  const int bpp = le16(&b[28]);
  const std::uint32_t compression = le32(&b[30]);
  if (compression != 0) throw FormatError("BMP: compressed files are not supported");
  if (bpp != 24 && bpp != 8) throw FormatError("BMP: only 8- and 24-bit files are supported");
  const bool top_down = h < 0;
  if (top_down) h = -h;
  if (w <= 0 || h <= 0) throw FormatError("BMP: bad dimensions");

  std::vector<std::uint8_t> palette;
  bool gray_palette = true;
  if (bpp == 8) {
    std::uint32_t count = le32(&b[46]);
    if (count == 0) count = 256;
    const size_t pal_at = 14 + header;
    if (pal_at + 4 * count > b.size()) throw FormatError("BMP: truncated palette");
    palette.assign(b.begin() + pal_at, b.begin() + pal_at + 4 * count);
    for (std::uint32_t i = 0; i < count; ++i)
      if (palette[4 * i] != palette[4 * i + 1] || palette[4 * i] != palette[4 * i + 2])
        gray_palette = false;
  }
  const int channels = (bpp == 8 && gray_palette) ? 1 : 3;
  const size_t stride = ((static_cast<size_t>(w) * bpp / 8) + 3) & ~size_t(3);
  if (offset + stride * h > b.size()) throw FormatError("BMP: truncated pixel data");

  Image out(h, w, channels);
  for (int r = 0; r < h; ++r) {
    const int src_row = top_down ? r : h - 1 - r;
    const std::uint8_t* row = &b[offset + stride * src_row];
    for (int c = 0; c < w; ++c) {
      if (bpp == 24) {
        out.at(r, c, 0) = row[3 * c + 2];
        out.at(r, c, 1) = row[3 * c + 1];
        out.at(r, c, 2) = row[3 * c + 0];
      } else {
        const size_t idx = 4 * size_t(row[c]);
        if (idx + 2 >= palette.size()) throw FormatError("BMP: palette index out of range");
        if (channels == 1) {
          out.at(r, c, 0) = palette[idx];
        } else {
          out.at(r, c, 0) = palette[idx + 2];
          out.at(r, c, 1) = palette[idx + 1];
          out.at(r, c, 2) = palette[idx + 0];
        }
      }
    }
  }
  return out;
}

inline std::vector<std::uint8_t> encode_bmp(const Image& img) {
  const int bpp = img.channels == 3 ? 24 : 8;
  const std::uint32_t pal = bpp == 8 ? 1024 : 0;
  const size_t stride = ((static_cast<size_t>(img.width) * bpp / 8) + 3) & ~size_t(3);
  const std::uint32_t offset = 54 + pal;
  const std::uint32_t pixels = static_cast<std::uint32_t>(stride * img.height);
  std::vector<std::uint8_t> v;
  v.reserve(offset + pixels);
  v.push_back('B');
  v.push_back('M');
  put32(v, offset + pixels);
  put32(v, 0);
  put32(v, offset);
  put32(v, 40);
  put32(v, static_cast<std::uint32_t>(img.width));
  put32(v, static_cast<std::uint32_t>(img.height));
  put16(v, 1);
  put16(v, static_cast<std::uint16_t>(bpp));
  put32(v, 0);
  put32(v, pixels);
  put32(v, 2835);
  put32(v, 2835);
  put32(v, bpp == 8 ? 256 : 0);
  put32(v, 0);
  if (bpp == 8)
    for (int i = 0; i < 256; ++i) {
      for (int k = 0; k < 3; ++k) v.push_back(static_cast<std::uint8_t>(i));
      v.push_back(0);
    }
  for (int r = img.height - 1; r >= 0; --r) {
    size_t start = v.size();
    for (int c = 0; c < img.width; ++c) {
      if (bpp == 24) {
        v.push_back(img.at(r, c, 2));
        v.push_back(img.at(r, c, 1));
        v.push_back(img.at(r, c, 0));
      } else {
        v.push_back(img.at(r, c, 0));
      }
    }
    while (v.size() - start < stride) v.push_back(0);
  }
  return v;
}

// -- PNM ----------------------------------------------------------------------

class PnmReader {
 public:
  explicit PnmReader(const std::vector<std::uint8_t>& b) : b_(b) {}

  int next_int() {
    skip_space();
    if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) throw FormatError("PNM: expected number");
    long v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > (1L << 24)) throw FormatError("PNM: number too large");
    }
    return static_cast<int>(v);
  }

  // ASCII bitmap digits may be packed without separators.
  int next_bit() {
    skip_space();
    if (pos_ >= b_.size() || (b_[pos_] != '0' && b_[pos_] != '1'))
      throw FormatError("PNM: expected bit");
    return b_[pos_++] - '0';
  }

  // Exactly one whitespace byte separates the header from binary data.
  size_t binary_start() const { return pos_ + 1; }

 private:
  void skip_space() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& b_;
  size_t pos_ = 2;
};

// Bitmaps decode to gray 0 (black, bit 1) / 255 (white, bit 0).
inline Image decode_pnm(const std::vector<std::uint8_t>& b) {
  const char kind = static_cast<char>(b[1]);
  PnmReader rd(b);
  const int w = rd.next_int();
  const int h = rd.next_int();
  if (w <= 0 || h <= 0) throw FormatError("PNM: bad dimensions");
  if (kind == '1' || kind == '4') {
    Image out(h, w, 1);
    if (kind == '1') {
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) out.at(r, c, 0) = rd.next_bit() ? 0 : 255;
    } else {
      const size_t stride = (static_cast<size_t>(w) + 7) / 8;
      const size_t at = rd.binary_start();
      if (at + stride * h > b.size()) throw FormatError("PNM: truncated bitmap");
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
          const int bit = (b[at + r * stride + c / 8] >> (7 - c % 8)) & 1;
          out.at(r, c, 0) = bit ? 0 : 255;
        }
    }
    return out;
  }
  const int maxval = rd.next_int();
  if (maxval != 255) throw FormatError("PNM: only maxval 255 is supported");
  const int ch = (kind == '3' || kind == '6') ? 3 : 1;
  Image out(h, w, ch);
  if (kind == '2' || kind == '3') {
    for (auto& v : out.data) {
      const int x = rd.next_int();
      if (x > 255) throw FormatError("PNM: sample out of range");
      v = static_cast<std::uint8_t>(x);
    }
  } else {
    const size_t at = rd.binary_start();
    if (at + out.data.size() > b.size()) throw FormatError("PNM: truncated raster");
    std::copy(b.begin() + at, b.begin() + at + out.data.size(), out.data.begin());
  }
  return out;
}

inline std::vector<std::uint8_t> encode_pnm(const Image& img) {
  std::ostringstream os;
  os << (img.channels == 3 ? "P6" : "P5") << "\n" << img.width << " " << img.height << "\n255\n";
  std::string head = os.str();
  std::vector<std::uint8_t> v(head.begin(), head.end());
  v.insert(v.end(), img.data.begin(), img.data.end());
  return v;
}

inline std::vector<std::uint8_t> encode_pbm(const BitMatrix& m) {
  std::ostringstream os;
  os << "P4\n" << m.cols << " " << m.rows << "\n";
  std::string head = os.str();
  std::vector<std::uint8_t> v(head.begin(), head.end());
  const size_t stride = (static_cast<size_t>(m.cols) + 7) / 8;
  for (int r = 0; r < m.rows; ++r) {
    std::vector<std::uint8_t> row(stride, 0);
    for (int c = 0; c < m.cols; ++c)
      if (m.at(r, c)) row[c / 8] |= static_cast<std::uint8_t>(0x80 >> (c % 8));
    v.insert(v.end(), row.begin(), row.end());
  }
  return v;
}

inline bool is_png(const std::vector<std::uint8_t>& b) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= 8 && std::equal(sig, sig + 8, b.begin());
}
inline bool is_bmp(const std::vector<std::uint8_t>& b) {
  return b.size() >= 2 && b[0] == 'B' && b[1] == 'M';
}
inline bool is_pnm(const std::vector<std::uint8_t>& b) {
  return b.size() >= 3 && b[0] == 'P' && b[1] >= '1' && b[1] <= '6';
}

}  // namespace io_detail

/// Decodes PNG, BMP or PNM by content.
inline Image read_image(const std::string& path) {
  auto bytes = io_detail::read_file(path);
  if (io_detail::is_png(bytes)) return io_detail::decode_png(bytes);
  if (io_detail::is_bmp(bytes)) return io_detail::decode_bmp(bytes);
  if (io_detail::is_pnm(bytes)) return io_detail::decode_pnm(bytes);
  throw FormatError(path + ": unrecognised image format");
}

/// Writes by extension: .png, .bmp, .pgm/.ppm/.pnm.
inline void write_image(const std::string& path, const Image& img) {
  const std::string ext = io_detail::lower_extension(path);
  if (ext == ".png") return io_detail::write_png(path, img);
  if (ext == ".bmp") return io_detail::write_file(path, io_detail::encode_bmp(img));
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm")
    return io_detail::write_file(path, io_detail::encode_pnm(img));
  throw FormatError(path + ": output must be .png, .bmp, .pgm or .ppm");
}

/// Dark pixels (mean < 128) are 1 bits.
inline BitMatrix image_to_bits(const Image& img) {
  BitMatrix m(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      int sum = 0;
      for (int ch = 0; ch < img.channels; ++ch) sum += img.at(r, c, ch);
      m.at(r, c) = sum < 128 * img.channels ? 1 : 0;
    }
  return m;
}

/// 1 bits become black.
inline Image bits_to_image(const BitMatrix& m) {
  Image img(m.rows, m.cols, 1);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) img.at(r, c, 0) = m.at(r, c) ? 0 : 255;
  return img;
}

/// Row-major, MSB first, (rows * cols + 7) / 8 bytes.
inline std::vector<std::uint8_t> pack_bits(const BitMatrix& m) {
  std::vector<std::uint8_t> out((m.size() + 7) / 8, 0);
  for (size_t i = 0; i < m.size(); ++i)
    if (m.bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  return out;
}

inline BitMatrix unpack_bits(const std::vector<std::uint8_t>& bytes, int rows, int cols) {
  BitMatrix m(rows, cols);
  if (bytes.size() * 8 < m.size()) throw FormatError("packed watermark too short");
  for (size_t i = 0; i < m.size(); ++i) m.bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  return m;
}

/// 64x64 watermark from PBM/PNG/BMP/PGM, or a raw 512-byte packed file.
inline BitMatrix read_watermark(const std::string& path, int rows = 64, int cols = 64) {
  auto bytes = io_detail::read_file(path);
  BitMatrix m;
  if (io_detail::is_png(bytes) || io_detail::is_bmp(bytes) || io_detail::is_pnm(bytes)) {
    m = image_to_bits(read_image(path));
  } else if (bytes.size() * 8 == static_cast<size_t>(rows) * cols) {
    m = unpack_bits(bytes, rows, cols);
  } else {
    throw FormatError(path + ": not an image or a raw " +
                      std::to_string(rows * cols / 8) + "-byte watermark");
  }
  if (m.rows != rows || m.cols != cols)
    throw FormatError(path + ": watermark must be " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  return m;
}

/// Writes by extension: .pbm, .raw/.bin (packed), otherwise as an image.
inline void write_watermark(const std::string& path, const BitMatrix& m) {
  const std::string ext = io_detail::lower_extension(path);
  if (ext == ".pbm") return io_detail::write_file(path, io_detail::encode_pbm(m));
  if (ext == ".raw" || ext == ".bin") return io_detail::write_file(path, pack_bits(m));
  write_image(path, bits_to_image(m));
}

}  // namespace sobomark
