#pragma once

// Weighted Sobolev polynomials and the N x N moment basis built from them.

#include <cmath>
#include <string>
#include <utility>

#include "sobomark/errors.hpp"
#include "sobomark/matrix.hpp"
#include "sobomark/numeric.hpp"
#include "sobomark/sobolev.hpp"

namespace sobomark {

/// S_n(x) sqrt(rho(x) / ||S_n||^2), with rho and the norm combined in log space.
template <class Real>
Real weighted_eval(const SobolevFamily<Real>& sf, int n, int x) {
  using std::exp;
  using std::log;
  if (x < 0) throw ParameterError("weighted polynomials are sampled on x >= 0");
  Real scale = exp((sf.classical().log_rho(x) - log(sf.norm_sq(n))) / Real(2));
  return sf.eval(n, Real(x)) * scale;
}

/// Weighted value of degree n + 1 from degrees n and n - 1 through
/// S_{n+1} = Psi_1 S_n + Psi_2 S_{n-1}.  Throws SingularPointError where
/// Xi_2 vanishes.
template <class Real>
Real weighted_recurrence_eval(const SobolevFamily<Real>& sf, int n_plus_1, int x) {
  using std::sqrt;
  const int n = n_plus_1 - 1;
  if (n < 1) throw ParameterError("weighted recurrence needs n + 1 >= 2");
  const Real xr(x);
  Real xi2 = sf.xi2(n, xr);
  if (xi2 == Real(0)) throw SingularPointError("Xi_2 vanishes; recurrence undefined");
  Real top = sqrt(sf.norm_sq(n + 1));
  Real psi1 = sqrt(sf.norm_sq(n)) / top * (sf.alpha_bar(n, xr) / xi2);
  Real psi2 = sqrt(sf.norm_sq(n - 1)) / top * (sf.beta_bar(n, xr) / xi2);
  return psi1 * weighted_eval(sf, n, x) + psi2 * weighted_eval(sf, n - 1, x);
}

/// weighted_recurrence_eval, falling back to weighted_eval at singular points.
template <class Real>
Real weighted_recurrence_or_direct(const SobolevFamily<Real>& sf, int n_plus_1, int x) {
  try {
    return weighted_recurrence_eval(sf, n_plus_1, x);
  } catch (const SingularPointError&) {
    return weighted_eval(sf, n_plus_1, x);
  }
}

/// The matrix A with A(x, n) = weighted S_n(x), x, n < N.  Immutable.
class MomentBasis {
 public:
  template <class Real>
  static MomentBasis build(const SobolevFamily<Real>& sf, int N = 8) {
    if (N < 2) throw ParameterError("block size must be >= 2");
    if (N - 1 > sf.n_max() + 1) throw ParameterError("block size exceeds cached degrees");
    Matrix a(N, N);
    for (int x = 0; x < N; ++x)
      for (int n = 0; n < N; ++n) {
        double v = to_double(weighted_eval(sf, n, x));
        if (!std::isfinite(v))
          throw ConstructionError("non-finite basis entry at n=" + std::to_string(n) +
                                  ", x=" + std::to_string(x));
        a(x, n) = v;
      }
    return MomentBasis(std::move(a));
  }

  /// Wraps an arbitrary square matrix (identity bases in tests, transposes).
  static MomentBasis from_matrix(Matrix a) {
    if (a.rows() != a.cols() || a.rows() < 1) throw DimensionError("basis must be square");
    for (double v : a.data())
      if (!std::isfinite(v)) throw ConstructionError("non-finite basis entry");
    return MomentBasis(std::move(a));
  }

  int size() const { return a_.rows(); }
  const Matrix& matrix() const { return a_; }
  double operator()(int x, int n) const { return a_(x, n); }

  /// M = A C A^t.
  Matrix direct(const Matrix& block) const {
    check(block);
    return multiply(a_, multiply(block, at_));
  }

  /// W = A^t M A.
  Matrix inverse(const Matrix& m) const {
    check(m);
    return multiply(at_, multiply(m, a_));
  }

  /// max |A^t A - I|.
  double orthonormality_defect() const {
    return max_abs_diff(multiply(at_, a_), Matrix::identity(size()));
  }

  MomentBasis transposed() const { return MomentBasis(at_); }

 private:
  explicit MomentBasis(Matrix a) : a_(std::move(a)), at_(a_.transposed()) {}

  void check(const Matrix& m) const {
    if (m.rows() != size() || m.cols() != size())
      throw DimensionError("block is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", basis is " + std::to_string(size()) +
                           "x" + std::to_string(size()));
  }

  Matrix a_;
  Matrix at_;
};

}  // namespace sobomark
