#pragma once

// Piecewise linear chaotic map and the key-dependent permutation it drives.

#include <cmath>
#include <cstdint>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/image.hpp"

namespace sobomark {

/// Secret pair (x0, mu_c): 0 < x0 < 1, 0 < mu_c < 0.5, x0 not a breakpoint.
struct ChaosKey {
  double x0 = 0.0;
  double mu_c = 0.0;

  void validate() const {
    if (!(x0 > 0.0 && x0 < 1.0)) throw ParameterError("chaos x0 must lie in (0, 1)");
    if (!(mu_c > 0.0 && mu_c < 0.5)) throw ParameterError("chaos mu_c must lie in (0, 0.5)");
    if (x0 == mu_c || x0 == 0.5) throw ParameterError("chaos x0 must not sit on a breakpoint");
  }
};

inline constexpr double kChaosNudge = 1e-13;

/// One step of the map; results of exactly 0 or 1 are pushed back inside.
inline double pwlcm_next(double x, double mu_c) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("chaotic map evaluated outside (0, 1)");
  if (x > 0.5) x = 1.0 - x;
  double y = x <= mu_c ? x / mu_c : (x - mu_c) / (0.5 - mu_c);
  if (y <= 0.0) y = kChaosNudge;
  if (y >= 1.0) y = 1.0 - kChaosNudge;
  return y;
}

/// Bijection on {0, ..., n-1}: index floor(x_k 1e14) mod n for the orbit
/// x_1, x_2, ..., skipping repeats.  At most 64 n map steps.
inline std::vector<int> chaotic_permutation(const ChaosKey& key, int n) {
  key.validate();
  if (n < 1) throw ParameterError("permutation length must be >= 1");
  std::vector<int> perm;
  perm.reserve(n);
  std::vector<char> used(n, 0);
  double x = key.x0;
  const long long budget = 64LL * n;
  for (long long step = 0; step < budget && static_cast<int>(perm.size()) < n; ++step) {
    x = pwlcm_next(x, key.mu_c);
    const auto idx = static_cast<int>(static_cast<std::int64_t>(std::floor(x * 1e14)) % n);
    if (!used[idx]) {
      used[idx] = 1;
      perm.push_back(idx);
    }
  }
  if (static_cast<int>(perm.size()) < n)
    throw DegenerateKeyError("chaotic orbit visited only " + std::to_string(perm.size()) +
                             " of " + std::to_string(n) + " indices");
  return perm;
}

/// s[k] = w[P[k]] over the row-major flattening.
inline BitMatrix scramble(const BitMatrix& w, const ChaosKey& key) {
  auto perm = chaotic_permutation(key, static_cast<int>(w.size()));
  BitMatrix s(w.rows, w.cols);
  for (size_t k = 0; k < w.size(); ++k) s.bits[k] = w.bits[perm[k]];
  return s;
}

inline BitMatrix unscramble(const BitMatrix& s, const ChaosKey& key) {
  auto perm = chaotic_permutation(key, static_cast<int>(s.size()));
  BitMatrix w(s.rows, s.cols);
  for (size_t k = 0; k < s.size(); ++k) w.bits[perm[k]] = s.bits[k];
  return w;
}

}  // namespace sobomark
