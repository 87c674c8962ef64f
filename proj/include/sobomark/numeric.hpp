#pragma once

// Small numeric helpers shared by the polynomial and Sobolev modules.  Every
// template here works for double as well as for boost::multiprecision types;
// math functions are called unqualified so ADL finds the right overload.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

namespace sobomark {

template <class Real>
inline double to_double(const Real& v) {
  return static_cast<double>(v);
}

/// Binomial coefficient C(n, k) as a Real; exact for the small n used here.
template <class Real>
Real binomial(int n, int k) {
  if (k < 0 || k > n) return Real(0);
  k = std::min(k, n - k);
  Real r(1);
  for (int i = 1; i <= k; ++i) {
    r *= Real(n - k + i);
    r /= Real(i);
  }
  return r;
}

/// Falling factorial [x]_k = x (x - 1) ... (x - k + 1); [x]_0 = 1.
template <class Real>
Real falling_factorial(const Real& x, int k) {
  Real r(1);
  for (int i = 0; i < k; ++i) r *= (x - Real(i));
  return r;
}

template <class Real>
Real factorial(int n) {
  Real r(1);
  for (int i = 2; i <= n; ++i) r *= Real(i);
  return r;
}

/// k-th forward difference by binomial expansion:
/// sum_{m=0..k} (-1)^(k-m) C(k, m) f(x + m).
template <class Real, class F>
Real forward_diff(F&& f, int k, const Real& x) {
  Real acc(0);
  for (int m = 0; m <= k; ++m) {
    Real term = binomial<Real>(k, m) * f(x + Real(m));
    if ((k - m) % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

/// k-th backward difference, nabla^k f(x) = sum (-1)^m C(k, m) f(x - m).
template <class Real, class F>
Real backward_diff(F&& f, int k, const Real& x) {
  Real acc(0);
  for (int m = 0; m <= k; ++m) {
    Real term = binomial<Real>(k, m) * f(x - Real(m));
    if (m % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

/// Neumaier-compensated sum of the given terms, accumulated in order of
/// increasing magnitude (largest last).
template <class Real>
Real compensated_sum(std::vector<Real> terms) {
  using std::abs;
  std::sort(terms.begin(), terms.end(),
            [](const Real& a, const Real& b) { return abs(a) < abs(b); });
  Real sum(0), comp(0);
  for (const Real& t : terms) {
    Real s = sum + t;
    if (abs(sum) >= abs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

/// Residual of an identity written as sum(terms) == 0.  `scale` is the sum of
/// the magnitudes of the terms, so `value <= tol * scale` is a relative check
/// that stays meaningful when the terms themselves are tiny.
template <class Real>
struct Residual {
  Real value{0};
  Real scale{0};

  static Residual of(std::initializer_list<Real> terms) {
    using std::abs;
    Residual r;
    Real sum(0);
    for (const Real& t : terms) {
      sum += t;
      r.scale += abs(t);
    }
    r.value = abs(sum);
    return r;
  }

  /// value / scale, or 0 when both vanish.
  Real relative() const {
    if (value == Real(0)) return Real(0);
    return value / scale;
  }

  bool within(double tol) const { return value <= Real(tol) * scale; }
};

}  // namespace sobomark
