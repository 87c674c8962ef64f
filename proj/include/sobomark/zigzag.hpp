#pragma once

#include <utility>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/matrix.hpp"

namespace sobomark {

/// JPEG zigzag order of an N x N block as (row, col) pairs.
inline std::vector<std::pair<int, int>> zigzag_order(int n) {
  if (n < 1) throw DimensionError("zigzag needs N >= 1");
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int s = 0; s <= 2 * n - 2; ++s) {
    const int lo = s < n ? 0 : s - n + 1;
    const int hi = s < n ? s : n - 1;
    if (s % 2 == 0) {
      for (int r = hi; r >= lo; --r) out.emplace_back(r, s - r);
    } else {
      for (int r = lo; r <= hi; ++r) out.emplace_back(r, s - r);
    }
  }
  return out;
}

template <class Block>
std::vector<double> zigzag(const Block& block, int n) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(n) * n);
  for (auto [r, c] : zigzag_order(n)) v.push_back(block(r, c));
  return v;
}

inline std::vector<double> zigzag(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("zigzag needs a square block");
  return zigzag(m, m.rows());
}

inline Matrix inverse_zigzag(const std::vector<double>& v, int n) {
  if (v.size() != static_cast<size_t>(n) * n)
    throw DimensionError("zigzag vector length does not match N*N");
  Matrix m(n, n);
  size_t k = 0;
  for (auto [r, c] : zigzag_order(n)) m(r, c) = v[k++];
  return m;
}

}  // namespace sobomark
