#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "sobomark/errors.hpp"
#include "sobomark/image.hpp"

namespace sobomark {

struct PsnrResult {
  double psnr_db = std::numeric_limits<double>::infinity();  // +inf when mse == 0
  double mse = 0.0;
  double peak = 0.0;
};

/// PSNR with peak = the largest sample of either image and the MSE averaged
/// over all rows * cols * channels samples.
inline PsnrResult psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw DimensionError("PSNR needs images of equal shape");
  PsnrResult r;
  double sum = 0.0;
  int peak = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = double(a.data[i]) - double(b.data[i]);
    sum += d * d;
    peak = std::max({peak, int(a.data[i]), int(b.data[i])});
  }
  r.peak = peak;
  r.mse = sum / static_cast<double>(a.data.size());
  if (r.mse > 0.0) r.psnr_db = 10.0 * std::log10(r.peak * r.peak / r.mse);
  return r;
}

/// Fraction of positions where the two bit sequences differ.
inline double ber(const BitMatrix& ref, const BitMatrix& got) {
  if (ref.size() != got.size() || ref.size() == 0)
    throw DimensionError("BER needs two non-empty sequences of equal length");
  size_t wrong = 0;
  for (size_t i = 0; i < ref.size(); ++i) wrong += (ref.bits[i] != 0) != (got.bits[i] != 0);
  return static_cast<double>(wrong) / static_cast<double>(ref.size());
}

}  // namespace sobomark
