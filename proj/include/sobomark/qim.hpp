#pragma once

// Dither modulation on one scalar coefficient: bit b lives on the lattice
// delta Z + d_b with d_0 = 0 and d_1 = delta / 2.

#include <cmath>

#include "sobomark/errors.hpp"

namespace sobomark {

struct QimConfig {
  double delta = 128.0;
  int coeff_index = 28;

  void validate(int block_size) const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("QIM delta must be > 0");
    if (coeff_index < 0 || coeff_index >= block_size * block_size)
      throw ParameterError("coefficient index outside the block");
  }
};

inline double qim_dither(int bit, double delta) { return bit ? delta / 2.0 : 0.0; }

inline double qim_embed(double coef, int bit, double delta) {
  const double d = qim_dither(bit, delta);
  return delta * std::round((coef - d) / delta) + d;
}

/// Nearest lattice wins; an exact tie goes to 0.
inline int qim_extract(double coef, double delta) {
  const double d0 = std::abs(coef - qim_embed(coef, 0, delta));
  const double d1 = std::abs(coef - qim_embed(coef, 1, delta));
  return d1 < d0 ? 1 : 0;
}

/// Distance from coef to the nearest decision boundary (0 at a tie).
inline double qim_margin(double coef, double delta) {
  const double d0 = std::abs(coef - qim_embed(coef, 0, delta));
  const double d1 = std::abs(coef - qim_embed(coef, 1, delta));
  return std::abs(d0 - d1) / 2.0;
}

}  // namespace sobomark
