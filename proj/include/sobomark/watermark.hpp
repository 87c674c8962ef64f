#pragma once

// Dual watermark: a 64x64 robust bit matrix quantized into one moment
// coefficient per block, and a 16-bit fragile signature written to pixel LSBs
// of every block in every channel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sobomark/chaos.hpp"
#include "sobomark/errors.hpp"
#include "sobomark/fragile.hpp"
#include "sobomark/image.hpp"
#include "sobomark/matrix.hpp"
#include "sobomark/momentbasis.hpp"
#include "sobomark/parallel.hpp"
#include "sobomark/qim.hpp"
#include "sobomark/zigzag.hpp"

namespace sobomark {

enum class ChannelPolicy { Blue, All };

inline const char* to_string(ChannelPolicy p) { return p == ChannelPolicy::Blue ? "blue" : "all"; }

inline ChannelPolicy parse_channel_policy(const std::string& s) {
  if (s == "blue") return ChannelPolicy::Blue;
  if (s == "all") return ChannelPolicy::All;
  throw ParameterError("channel policy must be 'blue' or 'all', got '" + s + "'");
}

struct WatermarkConfig {
  QimConfig qim;
  ChannelPolicy channels = ChannelPolicy::Blue;
  int threads = 1;
};

struct ExtractResult {
  BitMatrix robust;     // unscrambled 64x64 watermark
  BitMatrix scrambled;  // bits as read from the blocks
  bool authentic = true;
  BitMatrix tamper_map;  // one entry per block, 1 = signature mismatch
  int tampered_blocks = 0;
};

inline constexpr int kRobustSide = 64;
inline constexpr int kSignatureSlots = 16;

namespace wm_detail {

/// Channels that carry robust bits; "blue" is channel 2 of RGB, 0 of gray.
inline std::vector<int> robust_channels(const Image& img, ChannelPolicy p) {
  if (p == ChannelPolicy::All) {
    std::vector<int> all(img.channels);
    for (int c = 0; c < img.channels; ++c) all[c] = c;
    return all;
  }
  return {img.channels == 3 ? 2 : 0};
}

inline void check_geometry(const Image& img, int n, int needed_blocks) {
  if (img.height % n != 0 || img.width % n != 0)
    throw SizeError("size error: image " + std::to_string(img.width) + "x" +
                    std::to_string(img.height) + " is not a multiple of " + std::to_string(n));
  const int blocks = (img.height / n) * (img.width / n);
  if (blocks < needed_blocks)
    throw CapacityError("capacity error: " + std::to_string(blocks) + " blocks per channel, " +
                        std::to_string(needed_blocks) + " needed");
}

inline Matrix read_block(const Image& img, int r0, int c0, int ch, int n) {
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = img.at(r0 + r, c0 + c, ch);
  return m;
}

inline std::uint8_t to_byte(double v) {
  // std::round rounds halves away from zero.
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

inline void sign_block(Matrix& block, const Signature& sig,
                       const std::vector<std::pair<int, int>>& order) {
  for (int i = 0; i < kSignatureSlots; ++i) {
    auto [r, c] = order[i];
    auto v = static_cast<int>(block(r, c));
    block(r, c) = static_cast<double>((v & ~1) | sig[i]);
  }
}

inline bool block_signed(const Image& img, int r0, int c0, int ch, const Signature& sig,
                         const std::vector<std::pair<int, int>>& order) {
  for (int i = 0; i < kSignatureSlots; ++i) {
    auto [r, c] = order[i];
    if ((img.at(r0 + r, c0 + c, ch) & 1) != sig[i]) return false;
  }
  return true;
}

inline double robust_coefficient(const MomentBasis& basis, const Matrix& block, int index) {
  return zigzag(basis.direct(block))[index];
}

// Quantizes the selected coefficient and returns the final byte block.
// Lattice points q0, q0 -+ delta, q0 -+ 2 delta are tried nearest first; each
// candidate is judged on the block as it will be stored (rounded, clipped and
// signed).  A candidate whose bit survives with margin >= delta / 8 wins,
// otherwise the first whose bit survives at all.
inline Matrix embed_block(const MomentBasis& basis, const Matrix& cover, int bit,
                          const QimConfig& qim, const Signature& sig,
                          const std::vector<std::pair<int, int>>& order) {
  const int n = basis.size();
  std::vector<double> z = zigzag(basis.direct(cover));
  const double v = z[qim.coeff_index];
  const double q0 = qim_embed(v, bit, qim.delta);
  std::vector<double> cands;
  for (int t : {0, -1, 1, -2, 2}) cands.push_back(q0 + t * qim.delta);
  std::stable_sort(cands.begin(), cands.end(), [v](double a, double b) {
    return std::abs(a - v) < std::abs(b - v);
  });

  Matrix fallback, first;
  bool have_fallback = false;
  for (size_t i = 0; i < cands.size(); ++i) {
    z[qim.coeff_index] = cands[i];
    Matrix w = basis.inverse(inverse_zigzag(z, n));
    for (double& p : w.data()) p = to_byte(p);
    sign_block(w, sig, order);
    if (i == 0) first = w;
    const double got = robust_coefficient(basis, w, qim.coeff_index);
    if (qim_extract(got, qim.delta) != bit) continue;
    if (qim_margin(got, qim.delta) >= qim.delta / 8.0) return w;
    if (!have_fallback) {
      fallback = w;
      have_fallback = true;
    }
  }
  return have_fallback ? fallback : first;
}

}  // namespace wm_detail

/// Embeds `robust` (64x64) and the signature of `kappa` into `cover`.
inline Image embed(const Image& cover, const BitMatrix& robust, const std::string& kappa,
                   const MomentBasis& basis, const ChaosKey& key, const WatermarkConfig& cfg) {
  const int n = basis.size();
  if (n * n < kSignatureSlots) throw DimensionError("block too small for the signature");
  cfg.qim.validate(n);
  if (robust.rows != kRobustSide || robust.cols != kRobustSide)
    throw DimensionError("robust watermark must be 64x64");
  const int payload = kRobustSide * kRobustSide;
  wm_detail::check_geometry(cover, n, payload);

  const BitMatrix scrambled = scramble(robust, key);
  const Signature sig = fragile_signature(kappa);
  const auto order = zigzag_order(n);
  const auto robust_ch = wm_detail::robust_channels(cover, cfg.channels);
  const int bcols = cover.width / n;
  const int blocks = (cover.height / n) * bcols;

  Image out = cover;
  parallel_for(blocks * cover.channels, cfg.threads, [&](int task) {
    const int ch = task / blocks, k = task % blocks;
    const int r0 = (k / bcols) * n, c0 = (k % bcols) * n;
    Matrix block = wm_detail::read_block(cover, r0, c0, ch, n);
    const bool carries = k < payload &&
                         std::find(robust_ch.begin(), robust_ch.end(), ch) != robust_ch.end();
    if (carries) {
      block = wm_detail::embed_block(basis, block, scrambled.bits[k], cfg.qim, sig, order);
    } else {
      wm_detail::sign_block(block, sig, order);
    }
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out.at(r0 + r, c0 + c, ch) = static_cast<std::uint8_t>(block(r, c));
  });
  return out;
}

/// Reads the robust bits (majority over carrying channels) and checks the
/// signature of every block.
inline ExtractResult extract(const Image& marked, const MomentBasis& basis, const ChaosKey& key,
                             const WatermarkConfig& cfg, const std::string& kappa) {
  const int n = basis.size();
  cfg.qim.validate(n);
  const int payload = kRobustSide * kRobustSide;
  wm_detail::check_geometry(marked, n, payload);

  const Signature sig = fragile_signature(kappa);
  const auto order = zigzag_order(n);
  const auto robust_ch = wm_detail::robust_channels(marked, cfg.channels);
  const int brows = marked.height / n, bcols = marked.width / n;
  const int blocks = brows * bcols;

  std::vector<int> ones(payload, 0);
  std::vector<std::uint8_t> bad(blocks, 0);
  parallel_for(blocks, cfg.threads, [&](int k) {
    const int r0 = (k / bcols) * n, c0 = (k % bcols) * n;
    for (int ch = 0; ch < marked.channels; ++ch)
      if (!wm_detail::block_signed(marked, r0, c0, ch, sig, order)) bad[k] = 1;
    if (k >= payload) return;
    for (int ch : robust_ch) {
      Matrix block = wm_detail::read_block(marked, r0, c0, ch, n);
      ones[k] += qim_extract(wm_detail::robust_coefficient(basis, block, cfg.qim.coeff_index),
                             cfg.qim.delta);
    }
  });

  ExtractResult res;
  res.scrambled = BitMatrix(kRobustSide, kRobustSide);
  const int votes = static_cast<int>(robust_ch.size());
  for (int k = 0; k < payload; ++k) res.scrambled.bits[k] = 2 * ones[k] > votes ? 1 : 0;
  res.robust = unscramble(res.scrambled, key);
  res.tamper_map = BitMatrix(brows, bcols);
  for (int k = 0; k < blocks; ++k) {
    res.tamper_map.bits[k] = bad[k];
    res.tampered_blocks += bad[k];
  }
  res.authentic = res.tampered_blocks == 0;
  return res;
}

}  // namespace sobomark
