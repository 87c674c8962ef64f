#pragma once

// Residual harness for the classical and Sobolev identities.  Every identity
// is written as a sum of terms that must cancel; the harness records the
// worst value/scale ratio over an (n, x) grid and skips points where a
// closed-form coefficient is singular.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sobomark/numeric.hpp"
#include "sobomark/sobolev.hpp"

namespace sobomark {

struct SuiteConfig {
  int n_lo = 1;
  int n_hi = 8;
  int x_lo = 0;
  int x_hi = 20;
  double tol = 1e-9;
};

struct IdentityStat {
  std::string name;
  double max_relative = 0.0;
  int worst_n = -1;
  int worst_x = 0;
  int evaluated = 0;
  int skipped = 0;
  int vacuous = 0;
  bool passed = true;
};

template <class Real>
using IdentityFn = std::function<Residual<Real>(int, const Real&)>;

template <class Real>
struct NamedIdentity {
  std::string name;
  IdentityFn<Real> fn;
};

/// The full list of identities checked for one Sobolev family.
template <class Real>
std::vector<NamedIdentity<Real>> sobolev_identities(const SobolevFamily<Real>& sf) {
  using R = Residual<Real>;
  const auto& p = sf.classical();
  const int j = sf.j();
  const Real a = sf.alpha_point();
  auto S = [&sf](int n, const Real& x) { return sf.eval(n, x); };

  std::vector<NamedIdentity<Real>> out;
  out.push_back({"structure relation",
                 [&p](int n, const Real& x) { return p.structure_residual(n, x); }});
  out.push_back({"hypergeometric equation",
                 [&p](int n, const Real& x) { return p.hypergeometric_residual(n, x); }});

  auto kernel_split = [&p, j, a](int order, auto coeffs) {
    return [&p, j, a, order, coeffs](int n, const Real& x) {
      auto c = coeffs(n, x);
      return R::of({c.first * p.eval(n, x), c.second * p.eval(n - 1, x),
                    -p.kernel_ij(n - 1, order, j, x, a)});
    };
  };
  out.push_back({"kernel split (0,j)",
                 kernel_split(0, [&sf](int n, const Real& x) { return sf.conn_0j(n, x); })});
  out.push_back({"kernel split (1,j)",
                 kernel_split(1, [&sf](int n, const Real& x) { return sf.conn_1j(n, x); })});
  out.push_back({"kernel split (2,j)",
                 kernel_split(2, [&sf](int n, const Real& x) { return sf.conn_2j(n, x); })});

  out.push_back({"connection S_n", [&sf, &p, S](int n, const Real& x) {
                   auto e = sf.ef1(n, x);
                   return R::of({e.first * p.eval(n, x), e.second * p.eval(n - 1, x), -S(n, x)});
                 }});
  out.push_back({"connection S_n-1", [&sf, &p, S](int n, const Real& x) {
                   auto e = sf.ef2(n, x);
                   return R::of(
                       {e.first * p.eval(n, x), e.second * p.eval(n - 1, x), -S(n - 1, x)});
                 }});
  out.push_back({"inverse connection P_n", [&sf, &p, S](int n, const Real& x) {
                   auto e1 = sf.ef1(n, x), e2 = sf.ef2(n, x);
                   return R::of({sf.xi1(n, x) * p.eval(n, x), -S(n, x) * e2.second,
                                 S(n - 1, x) * e1.second});
                 }});
  out.push_back({"inverse connection P_n-1", [&sf, &p, S](int n, const Real& x) {
                   auto e1 = sf.ef1(n, x), e2 = sf.ef2(n, x);
                   return R::of({sf.xi1(n, x) * p.eval(n - 1, x), S(n, x) * e2.first,
                                 -S(n - 1, x) * e1.first});
                 }});

  out.push_back({"first difference", [&sf, &p](int n, const Real& x) {
                   auto e = sf.ef3(n, x);
                   return R::of({e.first * p.eval(n, x), e.second * p.eval(n - 1, x),
                                 -forward_diff([&sf, n](const Real& t) { return sf.eval(n, t); },
                                               1, x)});
                 }});
  out.push_back({"second difference", [&sf, &p](int n, const Real& x) {
                   auto e = sf.ef5(n, x);
                   return R::of({e.first * p.eval(n, x), e.second * p.eval(n - 1, x),
                                 -forward_diff([&sf, n](const Real& t) { return sf.eval(n, t); },
                                               2, x)});
                 }});
  out.push_back({"first structure relation", [&sf, S](int n, const Real& x) {
                   auto e = sf.ef4(n, x);
                   return R::of({e.first * S(n, x), e.second * S(n - 1, x),
                                 -sf.xi1(n, x) * sf.diff_eval(n, 1, x)});
                 }});
  out.push_back({"second structure relation", [&sf, S](int n, const Real& x) {
                   auto e = sf.ef6(n, x);
                   return R::of({e.first * S(n, x), e.second * S(n - 1, x),
                                 -sf.xi1(n, x) * sf.diff_eval(n, 2, x)});
                 }});
  out.push_back({"raised difference", [&sf, S](int n, const Real& x) {
                   auto e = sf.ef8(n, x);
                   return R::of({e.first * S(n, x), e.second * S(n - 1, x),
                                 -sf.xi1(n, x) * sf.diff_eval(n + 1, 1, x)});
                 }});
  out.push_back({"three-term recurrence",
                 [&sf](int n, const Real& x) { return sf.recurrence_residual(n, x); }});
  out.push_back({"difference equation I",
                 [&sf](int n, const Real& x) { return sf.sode1_residual(n, x); }});
  out.push_back({"difference equation II",
                 [&sf](int n, const Real& x) { return sf.sode2_residual(n, x); }});
  return out;
}

/// Below this every term is rounding noise of quantities that vanish exactly
/// (e.g. second differences of a degree-1 polynomial, or a point where all
/// recurrence coefficients have a common zero).
template <class Real>
Real vacuous_floor() {
  using std::pow;
  return pow(std::numeric_limits<Real>::epsilon(), Real(2) / Real(3));
}

/// Evaluates one identity over the grid.  Singular points are skipped;
/// points whose terms all sit below vacuous_floor() are counted separately.
template <class Real>
IdentityStat run_identity(const NamedIdentity<Real>& id, const SuiteConfig& cfg) {
  const Real floor = vacuous_floor<Real>();
  IdentityStat st;
  st.name = id.name;
  for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
    for (int x = cfg.x_lo; x <= cfg.x_hi; ++x) {
      Residual<Real> r;
      try {
        r = id.fn(n, Real(x));
      } catch (const SingularPointError&) {
        ++st.skipped;
        continue;
      }
      if (r.scale <= floor) {
        ++st.vacuous;
        continue;
      }
      ++st.evaluated;
      double rel = to_double(r.relative());
      if (!r.within(cfg.tol)) st.passed = false;
      if (!(rel <= st.max_relative)) {
        st.max_relative = rel;
        st.worst_n = n;
        st.worst_x = x;
      }
    }
  }
  return st;
}

template <class Real>
std::vector<IdentityStat> run_identity_suite(const SobolevFamily<Real>& sf,
                                             const SuiteConfig& cfg = {}) {
  std::vector<IdentityStat> out;
  for (const auto& id : sobolev_identities(sf)) out.push_back(run_identity(id, cfg));
  return out;
}

}  // namespace sobomark
