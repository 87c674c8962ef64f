#pragma once

// Sobolev-type polynomials S_n orthogonal with respect to
//
//   <f, g>_lambda = sum_{x >= 0} f(x) g(x) rho(x) + lambda Delta^j f(alpha) Delta^j g(alpha),
//
// built from the classical family through the kernel connection formula, and
// the coefficient chain (A, B) -> (C, D) -> (E_k, F_k) that turns that formula
// into structure relations, a three-term recurrence and two second-order
// difference equations.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/numeric.hpp"
#include "sobomark/polyfamilies.hpp"

namespace sobomark {

/// alpha < 0, lambda > 0, j >= 0.
struct SobolevParams {
  double alpha = -1.0;
  double lambda = 1.0;
  int j = 0;

  void validate() const {
    if (!std::isfinite(alpha) || !(alpha < 0.0))
      throw ParameterError("Sobolev point alpha must be negative");
    if (!std::isfinite(lambda) || !(lambda > 0.0))
      throw ParameterError("Sobolev mass lambda must be positive");
    if (j < 0) throw ParameterError("Sobolev difference order j must be >= 0");
  }
};

/// Two coefficients multiplying (P_n, P_{n-1}) or (S_n, S_{n-1}).
template <class Real>
struct CoeffPair {
  Real first;
  Real second;
};

template <class Real>
class SobolevFamily {
 public:
  using Pair = CoeffPair<Real>;

  /// Builds the classical family up to degree n_max + 2 and caches the
  /// correction factors and Sobolev norms for n <= n_max + 1.
  SobolevFamily(const FamilyParams& fam, const SobolevParams& sob, int n_max = 16)
      : fam_(fam, n_max + 3), sob_(sob), n_max_(n_max) {
    sob_.validate();
    if (n_max < 1) throw ParameterError("n_max must be >= 1");
    alpha_ = Real(sob_.alpha);
    lambda_ = Real(sob_.lambda);
    build_alpha_tables();
    build_corrections();
    build_norms();
  }

  const ClassicalFamily<Real>& classical() const { return fam_; }
  const SobolevParams& params() const { return sob_; }
  int n_max() const { return n_max_; }
  int j() const { return sob_.j; }
  const Real& alpha_point() const { return alpha_; }
  const Real& lambda_mass() const { return lambda_; }

  /// c_n = lambda Delta^j P_n(alpha) / (1 + lambda K_{n-1}^{(j,j)}(alpha, alpha)); c_0 = 0.
  const Real& correction(int n) const {
    check(n, n_max_ + 1);
    return corr_[n];
  }

  /// K_{n}^{(j,j)}(alpha, alpha) accumulated with compensated summation.
  const Real& kernel_jj_at_alpha(int n) const {
    check(n, n_max_);
    return kjj_[n];
  }

  /// True when [x - alpha]_{j+1} = 0, i.e. x in {alpha, ..., alpha + j}.
  bool is_degenerate(const Real& x) const {
    return falling_factorial(Real(x - alpha_), sob_.j + 1) == Real(0);
  }

  // -- evaluation ------------------------------------------------------------

  /// S_n(x) from the connection formula; S_0 = 1.
  Real eval(int n, const Real& x) const { return diff_eval(n, 0, x); }

  /// Delta^ell S_n(x) = Delta^ell P_n(x) - c_n K_{n-1}^{(ell,j)}(x, alpha).
  Real diff_eval(int n, int ell, const Real& x) const {
    check(n, n_max_ + 1);
    Real v = fam_.diff(n, ell, x);
    if (n == 0 || corr_[n] == Real(0)) return v;
    Real k(0);
    for (int m = 0; m < n; ++m) k += fam_.diff(m, ell, x) * kernel_weight_[m];
    return v - corr_[n] * k;
  }

  /// nabla^ell S_n(x) = Delta^ell S_n(x - ell).
  Real backward_diff_eval(int n, int ell, const Real& x) const {
    return diff_eval(n, ell, x - Real(ell));
  }

  // -- inner product -----------------------------------------------------------

  /// <f, g>_lambda with the support truncated at classical().support_cutoff().
  /// f and g take a Real argument.
  template <class F, class G>
  Real inner(F&& f, G&& g) const {
    using std::isfinite;
    Real s = fam_.weighted_sum([&](int x) { return f(Real(x)) * g(Real(x)); });
    Real df = forward_diff(f, sob_.j, alpha_);
    Real dg = forward_diff(g, sob_.j, alpha_);
    if (!isfinite(to_double(df)) || !isfinite(to_double(dg)))
      throw EvaluationError("non-finite difference at the Sobolev point");
    return s + lambda_ * df * dg;
  }

  /// ||S_n||_lambda^2 (cached).
  const Real& norm_sq(int n) const {
    check(n, n_max_ + 1);
    return norm_sq_[n];
  }

  // -- kernel decompositions ---------------------------------------------------

  /// (A_n^{(j)}(x, alpha), B_n^{(j)}(x, alpha)) with
  /// K_{n-1}^{(0,j)}(x, alpha) = A P_n(x) + B P_{n-1}(x).
  Pair conn_0j(int n, const Real& x) const {
    check(n, n_max_ + 1);
    if (n < 1) throw ParameterError("kernel decomposition needs n >= 1");
    const int j = sob_.j;
    Real d = x - alpha_;
    Real denom = falling_factorial(d, j + 1);
    if (denom == Real(0)) throw SingularPointError("x lies in {alpha, ..., alpha + j}");
    Real sa(0), sb(0), kfact(1), ff(1);
    for (int k = 0; k <= j; ++k) {
      if (k > 0) {
        kfact *= Real(k);
        ff *= (d - Real(k - 1));
      }
      sa += dalpha_[n - 1][k] / kfact * ff;
      sb += dalpha_[n][k] / kfact * ff;
    }
    Real pre = factorial<Real>(j) * fam_.inverse_squared_norm(n - 1) / denom;
    return {pre * sa, -pre * sb};
  }

  /// (C_{1,n}, D_{1,n}) with K_{n-1}^{(1,j)}(x, alpha) = C P_n(x) + D P_{n-1}(x).
  Pair conn_1j(int n, const Real& x) const {
    Pair here = conn_0j(n, x);
    Pair next = conn_0j(n, x + Real(1));
    return lift(n, x, here, next);
  }

  /// (C_{2,n}, D_{2,n}) with K_{n-1}^{(2,j)}(x, alpha) = C P_n(x) + D P_{n-1}(x).
  Pair conn_2j(int n, const Real& x) const {
    Pair here = conn_1j(n, x);
    Pair next = conn_1j(n, x + Real(1));
    return lift(n, x, here, next);
  }

  // -- connection coefficients (E_k, F_k) ---------------------------------------

  /// S_n = E_1 P_n + F_1 P_{n-1}.  For n = 0 this is (1, 0).
  Pair ef1(int n, const Real& x) const {
    if (n == 0) return {Real(1), Real(0)};
    Pair ab = conn_0j(n, x);
    return {Real(1) - corr_[n] * ab.first, -corr_[n] * ab.second};
  }

  /// S_{n-1} = E_2 P_n + F_2 P_{n-1}.
  Pair ef2(int n, const Real& x) const {
    if (n < 1) throw ParameterError("E2/F2 need n >= 1");
    if (n == 1) return {Real(0), Real(1)};
    Pair prev = ef1(n - 1, x);
    Real e2 = -prev.second / fam_.beta(n - 1);
    Real f2 = prev.first - (x - fam_.alpha(n - 1)) * e2;
    return {e2, f2};
  }

  /// Delta S_n = E_3 P_n + F_3 P_{n-1}.
  Pair ef3(int n, const Real& x) const {
    Real th = fam_.theta(x);
    Pair cd = conn_1j(n, x);
    return {fam_.alpha_tilde(n) * th - corr_[n] * cd.first,
            fam_.beta_tilde(n) * th - corr_[n] * cd.second};
  }

  /// Xi_1 Delta S_n = E_4 S_n + F_4 S_{n-1}.
  Pair ef4(int n, const Real& x) const {
    Pair e1 = ef1(n, x), e2 = ef2(n, x), e3 = ef3(n, x);
    return {e3.first * e2.second - e2.first * e3.second,
            e1.first * e3.second - e3.first * e1.second};
  }

  /// Delta^2 S_n = E_5 P_n + F_5 P_{n-1}.
  Pair ef5(int n, const Real& x) const {
    Pair cd = conn_2j(n, x);
    return {theta1(n, x) - corr_[n] * cd.first, theta2(n, x) - corr_[n] * cd.second};
  }

  /// Xi_1 Delta^2 S_n = E_6 S_n + F_6 S_{n-1}.
  Pair ef6(int n, const Real& x) const {
    Pair e1 = ef1(n, x), e2 = ef2(n, x), e5 = ef5(n, x);
    return {e5.first * e2.second - e2.first * e5.second,
            e1.first * e5.second - e5.first * e1.second};
  }

  /// Delta S_{n+1} = E_7 P_n + F_7 P_{n-1}.
  Pair ef7(int n, const Real& x) const {
    Pair e3 = ef3(n + 1, x);
    return {(x - fam_.alpha(n)) * e3.first + e3.second, -fam_.beta(n) * e3.first};
  }

  /// Xi_1 Delta S_{n+1} = E_8 S_n + F_8 S_{n-1}.
  Pair ef8(int n, const Real& x) const {
    Pair e1 = ef1(n, x), e2 = ef2(n, x), e7 = ef7(n, x);
    return {e7.first * e2.second - e2.first * e7.second,
            e1.first * e7.second - e7.first * e1.second};
  }

  /// Dispatch by index 1..8.
  Pair ef(int n, const Real& x, int which) const {
    switch (which) {
      case 1: return ef1(n, x);
      case 2: return ef2(n, x);
      case 3: return ef3(n, x);
      case 4: return ef4(n, x);
      case 5: return ef5(n, x);
      case 6: return ef6(n, x);
      case 7: return ef7(n, x);
      case 8: return ef8(n, x);
      default: throw ParameterError("coefficient index must be in 1..8");
    }
  }

  /// Xi_{1,n} = E_1 F_2 - E_2 F_1.
  Real xi1(int n, const Real& x) const {
    Pair e1 = ef1(n, x), e2 = ef2(n, x);
    return e1.first * e2.second - e2.first * e1.second;
  }

  /// Xi_{2,n} = Xi_{1,n} E_{4,n+1}.
  Real xi2(int n, const Real& x) const { return xi1(n, x) * ef4(n + 1, x).first; }

  Real alpha_bar(int n, const Real& x) const {
    return xi1(n + 1, x) * ef8(n, x).first - xi1(n, x) * ef4(n + 1, x).second;
  }

  Real beta_bar(int n, const Real& x) const { return xi1(n + 1, x) * ef8(n, x).second; }

  /// Coefficient of P_n in Delta^2 P_n.
  Real theta1(int n, const Real& x) const {
    Real th = fam_.theta(x), th1 = fam_.theta(x + Real(1));
    Real at = fam_.alpha_tilde(n);
    Real inner = at * at;
    if (n >= 2) inner -= fam_.beta_tilde(n) * fam_.beta_tilde(n - 1) / fam_.beta(n - 1);
    return at * (th1 - th) + th * th1 * inner;
  }

  /// Coefficient of P_{n-1} in Delta^2 P_n.
  Real theta2(int n, const Real& x) const {
    Real th = fam_.theta(x), th1 = fam_.theta(x + Real(1));
    Real bt = fam_.beta_tilde(n);
    Real inner = fam_.alpha_tilde(n) + fam_.alpha_tilde(n - 1);
    if (n >= 2) inner += fam_.beta_tilde(n - 1) * (x - fam_.alpha(n - 1)) / fam_.beta(n - 1);
    return bt * (th1 - th) + th * th1 * bt * inner;
  }

  // -- second-order difference equation coefficients --------------------------

  struct SodeCoeffs {
    Real r, s, t;
  };

  /// (R_n, S_n, T_n) of R Delta^2 S_n + S Delta S_n + T S_n = 0.
  SodeCoeffs sode_coeffs(int n, const Real& x) const {
    Pair e4 = ef4(n, x), e6 = ef6(n, x);
    Real xi = xi1(n, x);
    return {e4.second * xi, -e6.second * xi, e4.first * e6.second - e6.first * e4.second};
  }

  // -- identity residuals -------------------------------------------------------

  /// Xi_2 S_{n+1} - alpha_bar S_n - beta_bar S_{n-1}.
  Residual<Real> recurrence_residual(int n, const Real& x) const {
    if (n < 1) throw ParameterError("three-term recurrence needs n >= 1");
    return Residual<Real>::of({xi2(n, x) * eval(n + 1, x), -alpha_bar(n, x) * eval(n, x),
                               -beta_bar(n, x) * eval(n - 1, x)});
  }

  /// R Delta^2 S_n + S Delta S_n + T S_n.
  Residual<Real> sode1_residual(int n, const Real& x) const {
    SodeCoeffs c = sode_coeffs(n, x);
    return Residual<Real>::of(
        {c.r * diff_eval(n, 2, x), c.s * diff_eval(n, 1, x), c.t * eval(n, x)});
  }

  /// R(x-1) Delta nabla S_n + [S(x-1) - T(x-1)] nabla S_n + T(x-1) S_n.
  Residual<Real> sode2_residual(int n, const Real& x) const {
    Real xm = x - Real(1);
    SodeCoeffs c = sode_coeffs(n, xm);
    Real delta_nabla = diff_eval(n, 2, xm);  // Delta nabla f(x) = Delta^2 f(x - 1)
    Real nabla = backward_diff_eval(n, 1, x);
    return Residual<Real>::of({c.r * delta_nabla, (c.s - c.t) * nabla, c.t * eval(n, x)});
  }

 private:
  void check(int n, int hi) const {
    if (n < 0 || n > hi)
      throw ParameterError("degree " + std::to_string(n) + " outside [0, " +
                           std::to_string(hi) + "]");
  }

  // Apply Delta_x to K = a P_n + b P_{n-1} given (a, b) at x and x + 1.
  Pair lift(int n, const Real& x, const Pair& here, const Pair& next) const {
    Real th = fam_.theta(x);
    Real c = (next.first - here.first) + fam_.alpha_tilde(n) * th * next.first;
    Real d = fam_.beta_tilde(n) * th * next.first +
             fam_.alpha_tilde(n - 1) * th * next.second + (next.second - here.second);
    if (n >= 2) {
      Real ratio = fam_.beta_tilde(n - 1) / fam_.beta(n - 1);
      c -= ratio * th * next.second;
      d += ratio * th * (x - fam_.alpha(n - 1)) * next.second;
    }
    return {c, d};
  }

  void build_alpha_tables() {
    const int top = n_max_ + 2;
    dalpha_.assign(top + 1, std::vector<Real>(sob_.j + 1));
    for (int n = 0; n <= top; ++n)
      for (int k = 0; k <= sob_.j; ++k) dalpha_[n][k] = fam_.diff(n, k, alpha_);
    kernel_weight_.resize(top + 1);
    for (int n = 0; n <= top; ++n)
      kernel_weight_[n] = dalpha_[n][sob_.j] * fam_.inverse_squared_norm(n);
  }

  void build_corrections() {
    const int top = n_max_ + 2;
    kjj_.resize(top + 1);
    std::vector<Real> terms;
    for (int n = 0; n <= top; ++n) {
      terms.push_back(dalpha_[n][sob_.j] * dalpha_[n][sob_.j] * fam_.inverse_squared_norm(n));
      kjj_[n] = compensated_sum(terms);
    }
    corr_.assign(top + 1, Real(0));
    for (int n = 1; n <= top; ++n)
      corr_[n] = lambda_ * dalpha_[n][sob_.j] / (Real(1) + lambda_ * kjj_[n - 1]);
  }

  void build_norms() {
    norm_sq_.resize(n_max_ + 2);
    for (int n = 0; n <= n_max_ + 1; ++n) {
      auto s = [this, n](const Real& x) { return eval(n, x); };
      norm_sq_[n] = inner(s, s);
    }
  }

  ClassicalFamily<Real> fam_;
  SobolevParams sob_;
  int n_max_;
  Real alpha_, lambda_;
  std::vector<std::vector<Real>> dalpha_;  // Delta^k P_n(alpha), k <= j
  std::vector<Real> kernel_weight_;        // Delta^j P_n(alpha) / ||P_n||^2
  std::vector<Real> kjj_;
  std::vector<Real> corr_;
  std::vector<Real> norm_sq_;
};

}  // namespace sobomark
