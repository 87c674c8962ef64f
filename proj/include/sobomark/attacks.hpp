#pragma once

// Attack simulators used to probe robustness.  Filters follow the usual
// scipy.ndimage conventions (reflect boundary, Gaussian truncated at 4 sigma).

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sobomark/errors.hpp"
#include "sobomark/image.hpp"

namespace sobomark {

enum class AttackKind { Cropping, FourierEllipsoid, Gaussian, GaussianLaplace, MinimumFilter, SaltPepper };

inline constexpr std::array<AttackKind, 6> kAllAttacks = {
    AttackKind::Cropping,        AttackKind::FourierEllipsoid, AttackKind::Gaussian,
    AttackKind::GaussianLaplace, AttackKind::MinimumFilter,    AttackKind::SaltPepper};

inline const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Cropping: return "cropping";
    case AttackKind::FourierEllipsoid: return "fourier-ellipsoid";
    case AttackKind::Gaussian: return "gaussian";
    case AttackKind::GaussianLaplace: return "gaussian-laplace";
    case AttackKind::MinimumFilter: return "minimum-filter";
    case AttackKind::SaltPepper: return "salt-pepper";
  }
  return "?";
}

inline AttackKind parse_attack_kind(const std::string& name) {
  for (auto k : kAllAttacks)
    if (name == to_string(k)) return k;
  std::string list;
  for (auto k : kAllAttacks) list += std::string(list.empty() ? "" : ", ") + to_string(k);
  throw ParameterError("unknown attack '" + name + "' (expected one of: " + list + ")");
}

/// The eight parameter values per attack used in the robustness sweep.
inline std::vector<double> attack_grid(AttackKind k) {
  switch (k) {
    case AttackKind::Cropping: return {5, 10, 15, 20, 25, 30, 35, 40};
    case AttackKind::FourierEllipsoid:
    case AttackKind::MinimumFilter: return {1, 2, 3, 4, 5, 6, 7, 8};
    case AttackKind::Gaussian: return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    case AttackKind::GaussianLaplace: return {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08};
    case AttackKind::SaltPepper: return {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08};
  }
  return {};
}

struct AttackSpec {
  AttackKind kind = AttackKind::Cropping;
  double param = 0.0;
  std::uint64_t seed = 0;

  /// True when param lies inside the sweep range for this kind.
  bool in_grid() const {
    auto g = attack_grid(kind);
    return param >= g.front() - 1e-12 && param <= g.back() + 1e-12;
  }
};

namespace attack_detail {

/// Index into [0, n) after scipy's "reflect" extension (d c b a | a b c d | d c b a).
inline int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

inline std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

/// Gaussian taps of the given derivative order (0 or 2), radius int(4 sigma + 0.5).
inline std::vector<double> gaussian_kernel(double sigma, int order) {
  const int radius = static_cast<int>(4.0 * sigma + 0.5);
  const double s2 = sigma * sigma;
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int x = -radius; x <= radius; ++x) sum += k[x + radius] = std::exp(-0.5 * x * x / s2);
  for (double& v : k) v /= sum;
  if (order == 2)
    for (int x = -radius; x <= radius; ++x) k[x + radius] *= (x * x / (s2 * s2) - 1.0 / s2);
  return k;
}

using Plane = std::vector<double>;

inline Plane channel_plane(const Image& img, int ch) {
  Plane p(static_cast<size_t>(img.height) * img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) p[static_cast<size_t>(r) * img.width + c] = img.at(r, c, ch);
  return p;
}

inline Plane correlate_axis(const Plane& in, int h, int w, const std::vector<double>& k, bool rows) {
  const int radius = static_cast<int>(k.size() / 2);
  Plane out(in.size());
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        const int rr = rows ? reflect(r + t, h) : r;
        const int cc = rows ? c : reflect(c + t, w);
        acc += k[t + radius] * in[static_cast<size_t>(rr) * w + cc];
      }
      out[static_cast<size_t>(r) * w + c] = acc;
    }
  return out;
}

inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

/// Multiplies the 2-D spectrum by 2 J1(r) / r with r = pi size |f|.
inline Plane fourier_ellipsoid_plane(const Plane& in, int h, int w, double size) {
  const size_t n = static_cast<size_t>(h) * w;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!buf) throw Error("FFTW allocation failed");
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd = fftw_plan_dft_2d(h, w, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(h, w, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (size_t i = 0; i < n; ++i) {
    buf[i][0] = in[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(fwd);
  auto freq = [](int i, int len) { return (i < (len + 1) / 2 ? i : i - len) / double(len); };
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double fy = freq(r, h), fx = freq(c, w);
      const double rad = std::numbers::pi * size * std::sqrt(fx * fx + fy * fy);
      const double g = rad > 0.0 ? 2.0 * std::cyl_bessel_j(1.0, rad) / rad : 1.0;
      const size_t i = static_cast<size_t>(r) * w + c;
      buf[i][0] *= g;
      buf[i][1] *= g;
    }
  fftw_execute(bwd);
  Plane out(n);
  for (size_t i = 0; i < n; ++i) out[i] = buf[i][0] / static_cast<double>(n);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  return out;
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return v % n;
}

template <class F>
Image map_planes(const Image& img, F&& fn) {
  Image out(img.height, img.width, img.channels);
  for (int ch = 0; ch < img.channels; ++ch) {
    Plane p = fn(channel_plane(img, ch));
    for (int r = 0; r < img.height; ++r)
      for (int c = 0; c < img.width; ++c)
        out.at(r, c, ch) = to_byte(p[static_cast<size_t>(r) * img.width + c]);
  }
  return out;
}

}  // namespace attack_detail

inline Image crop_attack(const Image& img, double percent) {
  if (!(percent >= 0.0 && percent <= 100.0))
    throw ParameterError("crop percentage must lie in [0, 100]");
  const double side = std::sqrt(percent / 100.0);
  const int h = static_cast<int>(std::lround(img.height * side));
  const int w = static_cast<int>(std::lround(img.width * side));
  Image out = img;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      for (int ch = 0; ch < img.channels; ++ch) out.at(r, c, ch) = 0;
  return out;
}

inline Image gaussian_attack(const Image& img, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("Gaussian sigma must be > 0");
  using namespace attack_detail;
  const auto k = gaussian_kernel(sigma, 0);
  return map_planes(img, [&](const Plane& p) {
    return correlate_axis(correlate_axis(p, img.height, img.width, k, true), img.height,
                          img.width, k, false);
  });
}

/// Image plus its Laplacian of Gaussian.
inline Image gaussian_laplace_attack(const Image& img, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("Gaussian Laplace sigma must be > 0");
  using namespace attack_detail;
  const auto k0 = gaussian_kernel(sigma, 0);
  const auto k2 = gaussian_kernel(sigma, 2);
  const int h = img.height, w = img.width;
  return map_planes(img, [&](const Plane& p) {
    Plane dyy = correlate_axis(correlate_axis(p, h, w, k2, true), h, w, k0, false);
    Plane dxx = correlate_axis(correlate_axis(p, h, w, k0, true), h, w, k2, false);
    Plane out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[i] = p[i] + dyy[i] + dxx[i];
    return out;
  });
}

inline Image minimum_filter_attack(const Image& img, double size) {
  const int k = static_cast<int>(std::lround(size));
  if (k < 1 || std::abs(size - k) > 1e-9) throw ParameterError("minimum filter size must be a positive integer");
  using namespace attack_detail;
  const int lo = -(k / 2), hi = k - 1 - k / 2;
  const int h = img.height, w = img.width;
  return map_planes(img, [&](const Plane& p) {
    Plane rows(p.size()), out(p.size());
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        double m = 255.0;
        for (int t = lo; t <= hi; ++t) m = std::min(m, p[static_cast<size_t>(reflect(r + t, h)) * w + c]);
        rows[static_cast<size_t>(r) * w + c] = m;
      }
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        double m = 255.0;
        for (int t = lo; t <= hi; ++t) m = std::min(m, rows[static_cast<size_t>(r) * w + reflect(c + t, w)]);
        out[static_cast<size_t>(r) * w + c] = m;
      }
    return out;
  });
}

inline Image fourier_ellipsoid_attack(const Image& img, double size) {
  if (!(size > 0.0)) throw ParameterError("Fourier ellipsoid size must be > 0");
  using namespace attack_detail;
  return map_planes(img, [&](const Plane& p) {
    return fourier_ellipsoid_plane(p, img.height, img.width, size);
  });
}

/// round(density H W) distinct pixel positions, each forced to 0 or 255 in
/// every channel with equal probability.
inline Image salt_pepper_attack(const Image& img, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw ParameterError("density must lie in [0, 1]");
  const size_t pixels = static_cast<size_t>(img.height) * img.width;
  const auto count = static_cast<size_t>(std::llround(density * static_cast<double>(pixels)));
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> idx(pixels);
  for (size_t i = 0; i < pixels; ++i) idx[i] = static_cast<std::uint32_t>(i);
  Image out = img;
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + attack_detail::uniform_below(rng, pixels - i);
    std::swap(idx[i], idx[j]);
    const std::uint8_t v = (rng() >> 63) ? 255 : 0;
    const size_t p = idx[i];
    for (int ch = 0; ch < img.channels; ++ch) out.data[p * img.channels + ch] = v;
  }
  return out;
}

inline Image apply_attack(const Image& img, const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::Cropping: return crop_attack(img, spec.param);
    case AttackKind::FourierEllipsoid: return fourier_ellipsoid_attack(img, spec.param);
    case AttackKind::Gaussian: return gaussian_attack(img, spec.param);
    case AttackKind::GaussianLaplace: return gaussian_laplace_attack(img, spec.param);
    case AttackKind::MinimumFilter: return minimum_filter_attack(img, spec.param);
    case AttackKind::SaltPepper: return salt_pepper_attack(img, spec.param, spec.seed);
  }
  throw ParameterError("unknown attack kind");
}

}  // namespace sobomark
