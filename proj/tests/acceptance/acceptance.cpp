// Acceptance suite.  Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion k   run criterion k only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sobomark/identities.hpp"
#include "sobomark/precise.hpp"
#include "sobomark/sobomark.hpp"

using namespace sobomark;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const ChaosKey kKey{0.3731, 0.2917};
const std::string kKappa = "acceptance kappa";
constexpr int kCovers = 5;

struct Scheme {
  Preset preset;
  MomentBasis basis;
  WatermarkConfig cfg;
};

Scheme scheme(const Preset& p) {
  SobolevFamily<double> sf(p.family_params(), p.sobolev_params());
  WatermarkConfig cfg;
  cfg.qim = p.qim();
  cfg.threads = default_threads();
  return {p, MomentBasis::build(sf, 8), cfg};
}

const std::vector<Image>& covers() {
  static const std::vector<Image> imgs = [] {
    std::vector<Image> v;
    for (int i = 0; i < kCovers; ++i) v.push_back(synthetic_cover(i));
    return v;
  }();
  return imgs;
}

// -- 1: identity suite ----------------------------------------------------------

Outcome identity_suite() {
  const auto t0 = Clock::now();
  struct Case {
    std::string name;
    FamilyParams fam;
    SobolevParams sob;
  };
  std::vector<Case> cases;
  for (const auto& p : builtin_presets()) cases.push_back({p.name, p.family_params(), p.sobolev_params()});
  for (int j = 0; j <= 2; ++j)
    cases.push_back({"Charlier(1) a=-1 l=1 j=" + std::to_string(j), FamilyParams::charlier(1.0), {-1.0, 1.0, j}});

  Outcome o;
  double worst = 0.0;
  std::string worst_at;
  int evaluated = 0;
  for (const auto& c : cases) {
    SobolevFamily<Precise> sf(c.fam, c.sob);
    for (const auto& st : run_identity_suite(sf, {1, 8, 0, 20, 1e-9})) {
      evaluated += st.evaluated;
      if (!st.passed) {
        o.pass = false;
        o.detail += " [" + c.name + ": " + st.name + " " + fmt("%.3g", st.max_relative) + "]";
      }
      if (st.max_relative > worst) {
        worst = st.max_relative;
        worst_at = c.name + " / " + st.name;
      }
      if (st.evaluated == 0) {
        o.pass = false;
        o.detail += " [" + c.name + ": " + st.name + " never evaluated]";
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) o.pass = false;
  o.detail = std::to_string(cases.size()) + " parameter sets, " + std::to_string(evaluated) +
             " residuals, worst " + fmt("%.3g", worst) + " (" + worst_at + "), " + fmt("%.1f s", secs) +
             o.detail;
  return o;
}

// -- 2: oracle equivalence ------------------------------------------------------

struct OracleTally {
  double worst = 0.0;
  std::string where;
  int checked = 0;

  void add(double got, double exact, const std::string& what) {
    ++checked;
    const double err = exact == 0.0 ? std::abs(got) : std::abs(got - exact) / std::abs(exact);
    if (!(err <= worst)) {
      worst = err;
      where = what;
    }
  }
};

template <class T>
void oracle_preset(const Preset& p, const oracle::Family<T>& fam, OracleTally& t) {
  constexpr int kN = 12;
  ClassicalFamily<double> cf(p.family_params(), kN + 2);
  SobolevFamily<double> sf(p.family_params(), p.sobolev_params(), kN);
  oracle::Sobolev<T> os(fam, p.alpha, p.lambda, p.j, kN);
  const T a(p.alpha);
  for (int n = 0; n <= kN; ++n)
    for (int x = -21; x <= 20; ++x) {
      const T xt(x);
      const std::string at = p.name + " n=" + std::to_string(n) + " x=" + std::to_string(x);
      t.add(cf.eval(n, x), oracle::as_double(fam.eval(n, xt)), "eval_classical " + at);
      t.add(sf.eval(n, x), oracle::as_double(os.eval(n, xt)), "sobolev_eval " + at);
      for (int i = 0; i <= 2; ++i)
        t.add(cf.kernel_ij(n, i, p.j, x, p.alpha), oracle::as_double(fam.kernel_ij(n, i, p.j, xt, a)),
              "kernel_ij i=" + std::to_string(i) + " " + at);
    }
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  OracleTally t;
  for (const auto& p : builtin_presets()) {
    if (p.family == FamilyKind::Charlier)
      oracle_preset(p, oracle::Family<mpq_class>::charlier(p.mu), t);
    else
      oracle_preset(p, oracle::Family<oracle::Dec50>::meixner(p.gamma, p.mu), t);
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = t.worst <= 1e-10 && secs < 120.0;
  o.detail = std::to_string(t.checked) + " values, worst relative error " + fmt("%.3g", t.worst) + " (" +
             t.where + "), " + fmt("%.1f s", secs);
  return o;
}

// -- 3: orthogonality -----------------------------------------------------------

Outcome orthogonality() {
  Outcome o;
  double worst_ip = 0.0, worst_norm = 0.0;
  for (const auto& p : builtin_presets()) {
    SobolevFamily<double> sf(p.family_params(), p.sobolev_params());
    for (int m = 0; m <= 8; ++m) {
      auto f = [&](double x) { return sf.eval(m, x); };
      for (int n = m + 1; n <= 8; ++n) {
        auto g = [&](double x) { return sf.eval(n, x); };
        const double r = std::abs(sf.inner(f, g)) / std::sqrt(sf.norm_sq(m) * sf.norm_sq(n));
        worst_ip = std::max(worst_ip, r);
      }
      const double pn = sf.classical().squared_norm(m);
      worst_norm = std::max(worst_norm, std::abs(sf.norm_sq(m) - pn) / pn);
    }
  }
  o.pass = worst_ip <= 1e-8 && worst_norm <= 1e-6;
  o.detail = "max |<S_m,S_n>|/sqrt(norms) " + fmt("%.3g", worst_ip) + ", max norm deviation " +
             fmt("%.3g", worst_norm);
  return o;
}

// -- 4: basis orthonormality and byte round trip --------------------------------

Outcome basis_orthonormality() {
  Outcome o;
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> byte(0, 255);
  for (const auto& p : builtin_presets()) {
    SobolevFamily<double> sf(p.family_params(), p.sobolev_params());
    MomentBasis b = MomentBasis::build(sf, 8);
    const double defect = b.orthonormality_defect();
    int exact = 0;
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      Matrix blk(8, 8);
      for (double& v : blk.data()) v = byte(rng);
      Matrix back = b.inverse(b.direct(blk));
      bool ok = true;
      for (int i = 0; i < 64; ++i) {
        worst = std::max(worst, std::abs(back.data()[i] - blk.data()[i]));
        ok = ok && std::round(back.data()[i]) == blk.data()[i];
      }
      exact += ok;
    }
    if (defect > 1e-6 || exact != 1000) o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + p.name + " defect " + fmt("%.3g", defect) + ", exact " +
                std::to_string(exact) + "/1000, max error " + fmt("%.3g", worst);
  }
  return o;
}

// -- 5 and 6: clean round trip and PSNR -----------------------------------------

Outcome pipeline_round_trip() {
  Outcome o;
  const BitMatrix wm = synthetic_watermark();
  double slowest = 0.0;
  for (const auto& p : builtin_presets()) {
    Scheme s = scheme(p);
    int good = 0;
    for (const auto& cover : covers()) {
      const auto t0 = Clock::now();
      Image marked = embed(cover, wm, kKappa, s.basis, kKey, s.cfg);
      ExtractResult r = extract(marked, s.basis, kKey, s.cfg, kKappa);
      slowest = std::max(slowest, seconds_since(t0));
      good += ber(wm, r.robust) == 0.0 && r.authentic;
    }
    if (good < 4) o.pass = false;
    o.detail += (o.detail.empty() ? "" : ", ") + p.name + " " + std::to_string(good) + "/" +
                std::to_string(kCovers);
  }
  if (slowest >= 30.0) o.pass = false;
  o.detail += "; slowest image " + fmt("%.3f s", slowest);
  return o;
}

Outcome imperceptibility() {
  Outcome o;
  const BitMatrix wm = synthetic_watermark();
  for (const auto& p : builtin_presets()) {
    Scheme s = scheme(p);
    double lo = 1e300, hi = -1e300;
    for (const auto& cover : covers()) {
      const double db = psnr(cover, embed(cover, wm, kKappa, s.basis, kKey, s.cfg)).psnr_db;
      lo = std::min(lo, db);
      hi = std::max(hi, db);
    }
    if (lo < 37.0 || hi > 42.0) o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + p.name + " delta " + fmt("%g", p.qim_delta) + ": " +
                fmt("%.2f", lo) + ".." + fmt("%.2f dB", hi);
  }
  return o;
}

// -- 7: robustness trends -------------------------------------------------------

Outcome robustness() {
  Outcome o;
  const BitMatrix wm = synthetic_watermark();
  const ChaosKey wrong{kKey.x0 + 1e-10, kKey.mu_c};
  double sp_worst = 0.0, key_lo = 1.0, key_hi = 0.0;
  int monotone = 0, runs = 0;
  std::string crop_detail;
  for (const auto& p : builtin_presets()) {
    Scheme s = scheme(p);
    for (size_t i = 0; i < covers().size(); ++i) {
      Image marked = embed(covers()[i], wm, kKappa, s.basis, kKey, s.cfg);
      double prev = -1.0;
      bool ok = true;
      for (double pct : attack_grid(AttackKind::Cropping)) {
        const double b = ber(wm, extract(crop_attack(marked, pct), s.basis, kKey, s.cfg, kKappa).robust);
        ok = ok && b >= prev;
        prev = b;
      }
      ++runs;
      monotone += ok;
      if (!ok) crop_detail += " " + p.name + "/" + synthetic_cover_names()[i];
      sp_worst = std::max(sp_worst,
                          ber(wm, extract(salt_pepper_attack(marked, 0.01, 7 + i), s.basis, kKey, s.cfg, kKappa).robust));
      const double bk = ber(wm, extract(marked, s.basis, wrong, s.cfg, kKappa).robust);
      key_lo = std::min(key_lo, bk);
      key_hi = std::max(key_hi, bk);
    }
  }
  o.pass = monotone == runs && sp_worst < 0.15 && key_lo >= 0.4 && key_hi <= 0.6;
  o.detail = "crop BER non-decreasing " + std::to_string(monotone) + "/" + std::to_string(runs) +
             (crop_detail.empty() ? "" : " (not:" + crop_detail + ")") + ", salt-pepper 0.01 max BER " +
             fmt("%.4f", sp_worst) + ", wrong key BER " + fmt("%.4f", key_lo) + ".." + fmt("%.4f", key_hi);
  return o;
}

// -- 8: tamper localization -----------------------------------------------------

Outcome tamper_localization() {
  Outcome o;
  const BitMatrix wm = synthetic_watermark();
  std::mt19937_64 rng(99);
  std::vector<Scheme> schemes;
  for (const auto& p : builtin_presets()) schemes.push_back(scheme(p));
  int false_pos = 0, misplaced = 0, missed = 0, inauthentic = 0;
  constexpr int kTrials = 100;
  for (int t = 0; t < kTrials; ++t) {
    const Scheme& s = schemes[t % schemes.size()];
    const Image& cover = covers()[t % kCovers];
    const std::string kappa = kKappa + std::to_string(t);
    Image marked = embed(cover, wm, kappa, s.basis, kKey, s.cfg);

    ExtractResult clean = extract(marked, s.basis, kKey, s.cfg, kappa);
    if (!clean.authentic || clean.tampered_blocks != 0) ++false_pos;

    // A random block-aligned rectangle overwritten with noise.
    std::uniform_int_distribution<int> side(1, 16), start(0, 63);
    const int bh = side(rng), bw = side(rng);
    const int br = std::min(start(rng), 64 - bh), bc = std::min(start(rng), 64 - bw);
    Image tampered = marked;
    for (int r = br * 8; r < (br + bh) * 8; ++r)
      for (int c = bc * 8; c < (bc + bw) * 8; ++c)
        for (int ch = 0; ch < tampered.channels; ++ch) tampered.at(r, c, ch) = static_cast<std::uint8_t>(rng());
    ExtractResult r = extract(tampered, s.basis, kKey, s.cfg, kappa);
    if (r.authentic) ++inauthentic;
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        const bool inside = y >= br && y < br + bh && x >= bc && x < bc + bw;
        const bool near = y >= br - 1 && y <= br + bh && x >= bc - 1 && x <= bc + bw;
        const bool flag = r.tamper_map.at(y, x) != 0;
        if (inside && !flag) ++missed;
        if (flag && !near) ++misplaced;
      }
  }
  o.pass = false_pos == 0 && misplaced == 0 && missed == 0 && inauthentic == 0;
  o.detail = std::to_string(kTrials) + " trials: false positives on clean images " + std::to_string(false_pos) +
             ", tampered images reported authentic " + std::to_string(inauthentic) +
             ", overlapped blocks missed " + std::to_string(missed) + ", flags outside the region " +
             std::to_string(misplaced);
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"identity suite", identity_suite},
      {"oracle equivalence", oracle_equivalence},
      {"Sobolev orthogonality", orthogonality},
      {"basis orthonormality", basis_orthonormality},
      {"pipeline round trip", pipeline_round_trip},
      {"imperceptibility", imperceptibility},
      {"robustness trends", robustness},
      {"tamper localization", tamper_localization},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion k]\n";
      return 2;
    }
  }
  const int count = static_cast<int>(criteria().size());
  if (only < 0 || only > count) {
    std::cerr << "criterion must lie in 1.." << count << "\n";
    return 2;
  }
  bool all = true;
  for (int k = 1; k <= count; ++k) {
    if (only && k != only) continue;
    Outcome o;
    try {
      o = criteria()[k - 1].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << k << " " << criteria()[k - 1].title << ": " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
