#pragma once

// Monic Charlier and Meixner polynomials: recurrence data, weights, norms,
// difference operators and Christoffel-Darboux kernels.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/numeric.hpp"

namespace sobomark {

enum class FamilyKind { Charlier, Meixner };

inline const char* to_string(FamilyKind k) {
  return k == FamilyKind::Charlier ? "Charlier" : "Meixner";
}

/// Which classical family plus its parameters.  Charlier uses mu > 0;
/// Meixner uses 0 < mu < 1 and gamma > 0.
struct FamilyParams {
  FamilyKind kind = FamilyKind::Charlier;
  double mu = 1.0;
  double gamma = 0.0;

  static FamilyParams charlier(double mu) { return {FamilyKind::Charlier, mu, 0.0}; }
  static FamilyParams meixner(double gamma, double mu) {
    return {FamilyKind::Meixner, mu, gamma};
  }

  void validate() const {
    if (!std::isfinite(mu) || !std::isfinite(gamma))
      throw ParameterError("family parameters must be finite");
    if (kind == FamilyKind::Charlier) {
      if (!(mu > 0.0)) throw ParameterError("Charlier requires mu > 0");
    } else {
      if (!(mu > 0.0 && mu < 1.0)) throw ParameterError("Meixner requires 0 < mu < 1");
      if (!(gamma > 0.0)) throw ParameterError("Meixner requires gamma > 0");
    }
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind) << "(mu=" << mu;
    if (kind == FamilyKind::Meixner) os << ", gamma=" << gamma;
    os << ")";
    return os.str();
  }
};

namespace detail {

template <class Real>
Real log_one_minus(const Real& mu) {
  using std::log;
  return log(Real(1) - mu);
}

inline double log_one_minus(const double& mu) { return std::log1p(-mu); }

}  // namespace detail

/// Evaluation engine for one classical family.
///
/// Polynomials are stored through their expansion in the falling-factorial
/// basis, P_n(x) = sum_k c_{n,k} [x]_k.  The three-term recurrence is
/// available as eval_recurrence() and is checked by recurrence_residual().
///
/// Immutable after construction; all members are safe to call concurrently.
template <class Real>
class ClassicalFamily {
 public:
  explicit ClassicalFamily(const FamilyParams& params, int max_degree = 18)
      : params_(params), max_degree_(max_degree) {
    params_.validate();
    if (max_degree < 1) throw ParameterError("max_degree must be >= 1");
    mu_ = Real(params_.mu);
    gamma_ = Real(params_.gamma);
    build_coefficients();
    build_norms();
    build_weights();
  }

  const FamilyParams& params() const { return params_; }
  FamilyKind kind() const { return params_.kind; }
  int max_degree() const { return max_degree_; }

  // -- recurrence and difference-equation data ---------------------------

  Real alpha(int n) const {
    if (is_charlier()) return Real(n) + mu_;
    return (Real(n) * (Real(1) + mu_) + mu_ * gamma_) / (Real(1) - mu_);
  }

  Real beta(int n) const {
    if (is_charlier()) return Real(n) * mu_;
    Real d = mu_ - Real(1);
    return Real(n) * mu_ * (Real(n - 1) + gamma_) / (d * d);
  }

  Real sigma(const Real& x) const { return x; }

  Real tau(const Real& x) const {
    if (is_charlier()) return mu_ - x;
    return (mu_ - Real(1)) * x + mu_ * gamma_;
  }

  Real lambda(int n) const {
    if (is_charlier()) return Real(n);
    return (Real(1) - mu_) * Real(n);
  }

  Real alpha_tilde(int n) const {
    if (is_charlier()) return Real(0);
    return Real(n) * mu_;
  }

  Real beta_tilde(int n) const {
    if (is_charlier()) return Real(n) * mu_;
    return Real(n) * mu_ * (Real(n - 1) + gamma_) / (Real(1) - mu_);
  }

  /// Theta(x) = 1 / (sigma(x) + tau(x)).
  Real theta(const Real& x) const {
    Real s = sigma(x) + tau(x);
    if (s == Real(0)) throw SingularPointError("sigma(x) + tau(x) vanishes");
    return Real(1) / s;
  }

  // -- weight and norms ----------------------------------------------------

  /// Last support point kept by truncated sums over x >= 0.
  int support_cutoff() const { return static_cast<int>(log_rho_.size()) - 1; }

  Real log_rho(int x) const {
    if (x < 0) return -Real(std::numeric_limits<double>::infinity());
    if (x <= support_cutoff()) return log_rho_[x];
    return log_rho_direct(x);
  }

  Real rho(int x) const {
    using std::exp;
    if (x < 0) return Real(0);
    return exp(log_rho(x));
  }

  Real log_squared_norm(int n) const {
    check_degree(n);
    return log_norm_[n];
  }

  Real squared_norm(int n) const {
    check_degree(n);
    return norm_[n];
  }

  Real inverse_squared_norm(int n) const {
    check_degree(n);
    return inv_norm_[n];
  }

  /// Sum over the truncated support {0, ..., support_cutoff()} of f(x) rho(x).
  template <class F>
  Real weighted_sum(F&& f) const {
    using std::isfinite;
    Real acc(0);
    for (int x = 0; x <= support_cutoff(); ++x) {
      Real v = f(x);
      if (!isfinite(to_double(v))) throw EvaluationError("non-finite value in weighted sum");
      acc += v * rho_[x];
    }
    return acc;
  }

  // -- evaluation ------------------------------------------------------------

  /// Monic P_n(x).
  Real eval(int n, const Real& x) const {
    check_degree(n);
    return newton_eval(coeff_[n].data(), n, x);
  }

  /// Forward difference Delta^m P_n(x), using Delta [x]_k = k [x]_{k-1}.
  Real diff(int n, int m, const Real& x) const {
    check_degree(n);
    if (m < 0) throw ParameterError("difference order must be >= 0");
    if (m == 0) return eval(n, x);
    if (m > n) return Real(0);
    std::vector<Real> d(n - m + 1);
    for (int i = 0; i <= n - m; ++i)
      d[i] = coeff_[n][i + m] * falling_factorial(Real(i + m), m);
    return newton_eval(d.data(), n - m, x);
  }

  /// Backward difference nabla^m P_n(x) = Delta^m P_n(x - m).
  Real backward_diff(int n, int m, const Real& x) const { return diff(n, m, x - Real(m)); }

  /// P_n(x) by forward iteration of x P_n = P_{n+1} + alpha_n P_n + beta_n P_{n-1}.
  Real eval_recurrence(int n, const Real& x) const {
    if (n == 0) return Real(1);
    Real prev(1), cur = x - alpha(0);
    for (int k = 1; k < n; ++k) {
      Real next = (x - alpha(k)) * cur - beta(k) * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }

  /// Coefficient c_{n,k} of [x]_k in P_n.
  const Real& expansion_coefficient(int n, int k) const {
    check_degree(n);
    return coeff_[n][k];
  }

  // -- reproducing kernels ---------------------------------------------------

  /// K_n(x, y) from its definition sum_{k<=n} P_k(x) P_k(y) / ||P_k||^2.
  Real kernel_sum(int n, const Real& x, const Real& y) const {
    return kernel_ij(n, 0, 0, x, y);
  }

  /// K_n(x, y) from the Christoffel-Darboux quotient; x != y.
  Real kernel_cd(int n, const Real& x, const Real& y) const {
    check_degree(n + 1);
    if (x == y) throw SingularPointError("Christoffel-Darboux quotient at x == y");
    Real num = eval(n + 1, x) * eval(n, y) - eval(n + 1, y) * eval(n, x);
    return num * inv_norm_[n] / (x - y);
  }

  /// K_n(x, y): closed form off the diagonal band, definitional sum on it.
  Real kernel(int n, const Real& x, const Real& y) const {
    using std::abs;
    if (abs(x - y) > Real(kCdBand)) return kernel_cd(n, x, y);
    return kernel_sum(n, x, y);
  }

  /// K_n^{(i,j)}(x, y) = sum_k Delta^i P_k(x) Delta^j P_k(y) / ||P_k||^2.
  Real kernel_ij(int n, int i, int j, const Real& x, const Real& y) const {
    check_degree(n);
    Real acc(0);
    for (int k = 0; k <= n; ++k) acc += diff(k, i, x) * diff(k, j, y) * inv_norm_[k];
    return acc;
  }

  // -- identity residuals ----------------------------------------------------

  /// x P_n - P_{n+1} - alpha_n P_n - beta_n P_{n-1}.
  Residual<Real> recurrence_residual(int n, const Real& x) const {
    Real pm1 = n > 0 ? eval(n - 1, x) : Real(0);
    Real pn = eval(n, x);
    return Residual<Real>::of({x * pn, -eval(n + 1, x), -alpha(n) * pn, -beta(n) * pm1});
  }

  /// [sigma + tau] Delta P_n - alpha~_n P_n - beta~_n P_{n-1}.
  Residual<Real> structure_residual(int n, const Real& x) const {
    if (n == 0) return Residual<Real>::of({diff(0, 1, x)});
    return Residual<Real>::of({(sigma(x) + tau(x)) * diff(n, 1, x),
                               -alpha_tilde(n) * eval(n, x),
                               -beta_tilde(n) * eval(n - 1, x)});
  }

  /// sigma Delta nabla P_n + tau Delta P_n + lambda_n P_n.
  Residual<Real> hypergeometric_residual(int n, const Real& x) const {
    // Delta nabla f(x) = Delta^2 f(x - 1)
    return Residual<Real>::of({sigma(x) * diff(n, 2, x - Real(1)), tau(x) * diff(n, 1, x),
                               lambda(n) * eval(n, x)});
  }

  static constexpr double kCdBand = 1e-6;

 private:
  bool is_charlier() const { return params_.kind == FamilyKind::Charlier; }

  void check_degree(int n) const {
    if (n < 0 || n > max_degree_)
      throw ParameterError("degree " + std::to_string(n) + " outside [0, " +
                           std::to_string(max_degree_) + "]");
  }

  // sum_k c_k [x]_k in nested form c_0 + x (c_1 + (x - 1) (c_2 + ...)).
  static Real newton_eval(const Real* c, int n, const Real& x) {
    Real r = c[n];
    for (int k = n - 1; k >= 0; --k) r = c[k] + (x - Real(k)) * r;
    return r;
  }

  void build_coefficients() {
    // Charlier: c_{n,k} = C(n,k) (-mu)^{n-k}
    // Meixner:  c_{n,k} = C(n,k) (gamma + k)_{n-k} (-mu / (1 - mu))^{n-k}
    Real step = is_charlier() ? -mu_ : -mu_ / (Real(1) - mu_);
    coeff_.assign(max_degree_ + 1, {});
    for (int n = 0; n <= max_degree_; ++n) {
      coeff_[n].assign(n + 1, Real(0));
      for (int k = 0; k <= n; ++k) {
        Real c = binomial<Real>(n, k);
        for (int i = 0; i < n - k; ++i) {
          c *= step;
          if (!is_charlier()) c *= gamma_ + Real(k + i);
        }
        coeff_[n][k] = c;
      }
    }
  }

  void build_norms() {
    using std::exp;
    using std::log;
    log_norm_.resize(max_degree_ + 1);
    norm_.resize(max_degree_ + 1);
    inv_norm_.resize(max_degree_ + 1);
    Real log_mu = log(mu_);
    for (int n = 0; n <= max_degree_; ++n) {
      Real v(0);
      for (int i = 2; i <= n; ++i) v += log(Real(i));
      v += Real(n) * log_mu;
      if (!is_charlier()) {
        for (int i = 0; i < n; ++i) v += log(gamma_ + Real(i));
        v -= (gamma_ + Real(2 * n)) * detail::log_one_minus(mu_);
      }
      log_norm_[n] = v;
      norm_[n] = exp(v);
      inv_norm_[n] = exp(-v);
    }
  }

  Real log_rho_direct(int x) const {
    using std::log;
    Real v = Real(x) * log(mu_);
    for (int i = 2; i <= x; ++i) v -= log(Real(i));
    if (is_charlier()) {
      v -= mu_;
    } else {
      for (int i = 0; i < x; ++i) v += log(gamma_ + Real(i));
    }
    return v;
  }

  // Support truncation: stop once rho(x) (1 + x)^{2 n} has stayed below
  // 1e-18 of the accumulated bound for 8 consecutive points (cap 10000).
  // Computed in double so every Real instantiation shares the same cutoff.
  int compute_cutoff() const {
    const double log_mu = std::log(params_.mu);
    double log_r = params_.kind == FamilyKind::Charlier ? -params_.mu : 0.0;
    double partial = 0.0;
    int quiet = 0;
    int x = 0;
    for (; x < kMaxSupport; ++x) {
      if (x > 0) {
        log_r += log_mu - std::log(static_cast<double>(x));
        if (params_.kind == FamilyKind::Meixner) log_r += std::log(params_.gamma + x - 1);
      }
      double bound = std::exp(log_r + 2.0 * max_degree_ * std::log1p(static_cast<double>(x)));
      partial += bound;
      quiet = bound < 1e-18 * partial ? quiet + 1 : 0;
      if (quiet >= 8) break;
    }
    return x;
  }

  void build_weights() {
    using std::exp;
    using std::log;
    int cutoff = compute_cutoff();
    log_rho_.resize(cutoff + 1);
    rho_.resize(cutoff + 1);
    Real log_mu = log(mu_);
    Real v = is_charlier() ? -mu_ : Real(0);
    for (int x = 0; x <= cutoff; ++x) {
      if (x > 0) {
        v += log_mu - log(Real(x));
        if (!is_charlier()) v += log(gamma_ + Real(x - 1));
      }
      log_rho_[x] = v;
      rho_[x] = exp(v);
    }
  }

  static constexpr int kMaxSupport = 10000;

  FamilyParams params_;
  int max_degree_;
  Real mu_, gamma_;
  std::vector<std::vector<Real>> coeff_;
  std::vector<Real> log_norm_, norm_, inv_norm_;
  std::vector<Real> log_rho_, rho_;
};

}  // namespace sobomark
