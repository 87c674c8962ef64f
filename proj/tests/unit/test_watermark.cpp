#include <gtest/gtest.h>

#include <algorithm>

#include "sobomark/errors.hpp"
#include "sobomark/fragile.hpp"
#include "sobomark/metrics.hpp"
#include "sobomark/momentbasis.hpp"
#include "sobomark/presets.hpp"
#include "sobomark/synthetic.hpp"
#include "sobomark/watermark.hpp"

using namespace sobomark;

namespace {

const ChaosKey kKey{0.3731, 0.2917};
const std::string kKappa = "unit-test kappa";

struct Fixture {
  Preset preset;
  MomentBasis basis;
  WatermarkConfig cfg;
};

Fixture setup(const std::string& name) {
  Preset p = load_preset(name);
  SobolevFamily<double> sf(p.family_params(), p.sobolev_params());
  WatermarkConfig cfg;
  cfg.qim = p.qim();
  cfg.threads = 4;
  return {p, MomentBasis::build(sf, 8), cfg};
}

int flagged(const ExtractResult& r) {
  return static_cast<int>(std::count(r.tamper_map.bits.begin(), r.tamper_map.bits.end(), 1));
}

}  // namespace

TEST(Fragile, SignatureIsDigestPrefix) {
  // SHA-256("abc") starts with ba 78.
  auto s = fragile_signature("abc");
  const Signature want = {1, 0, 1, 1, 1, 0, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0};
  EXPECT_EQ(s, want);
  EXPECT_EQ(hex_digest("abc").substr(0, 8), "ba7816bf");
}

TEST(Watermark, RoundTripEveryPreset) {
  const Image cover = synthetic_cover(1);
  const BitMatrix wm = synthetic_watermark();
  for (const auto& p : builtin_presets()) {
    const std::string& name = p.name;
    Fixture s = setup(name);
    Image marked = embed(cover, wm, kKappa, s.basis, kKey, s.cfg);
    ExtractResult r = extract(marked, s.basis, kKey, s.cfg, kKappa);
    EXPECT_EQ(ber(wm, r.robust), 0.0) << name;
    EXPECT_TRUE(r.authentic) << name;
    EXPECT_EQ(flagged(r), 0) << name;
  }
}

TEST(Watermark, PsnrInRange) {
  const BitMatrix wm = synthetic_watermark();
  Fixture s = setup("CS_I");
  const Image cover = synthetic_cover(2);
  const double db = psnr(cover, embed(cover, wm, kKappa, s.basis, kKey, s.cfg)).psnr_db;
  EXPECT_GE(db, 37.0);
  EXPECT_LE(db, 42.0);
}

TEST(Watermark, PsnrFallsAsStepGrows) {
  const BitMatrix zeros(64, 64);
  const Image cover = synthetic_cover(0);
  Fixture s = setup("CS_II");
  double prev = 1e300;
  for (double delta : {2.0, 4.0, 8.0, 16.0}) {
    s.cfg.qim.delta = delta;
    const double db = psnr(cover, embed(cover, zeros, kKappa, s.basis, kKey, s.cfg)).psnr_db;
    EXPECT_LT(db, prev) << "delta=" << delta;
    prev = db;
  }
}

TEST(Watermark, DeterministicAcrossThreadCounts) {
  const Image cover = synthetic_cover(3);
  const BitMatrix wm = synthetic_watermark();
  Fixture s = setup("MS_II");
  Image a = embed(cover, wm, kKappa, s.basis, kKey, s.cfg);
  s.cfg.threads = 1;
  EXPECT_EQ(a, embed(cover, wm, kKappa, s.basis, kKey, s.cfg));
}

TEST(Watermark, GrayscaleCover) {
  Image rgb = synthetic_cover(2);
  Image gray(512, 512, 1);
  for (int r = 0; r < 512; ++r)
    for (int c = 0; c < 512; ++c) gray.at(r, c, 0) = rgb.at(r, c, 1);
  Fixture s = setup("CS_I");
  const BitMatrix wm = synthetic_watermark();
  ExtractResult r = extract(embed(gray, wm, kKappa, s.basis, kKey, s.cfg), s.basis, kKey, s.cfg, kKappa);
  EXPECT_EQ(ber(wm, r.robust), 0.0);
  EXPECT_TRUE(r.authentic);
}

TEST(Watermark, AllChannelsPolicy) {
  Fixture s = setup("CS_II");
  s.cfg.channels = ChannelPolicy::All;
  const Image cover = synthetic_cover(4);
  const BitMatrix wm = synthetic_watermark();
  ExtractResult r = extract(embed(cover, wm, kKappa, s.basis, kKey, s.cfg), s.basis, kKey, s.cfg, kKappa);
  EXPECT_EQ(ber(wm, r.robust), 0.0);
  EXPECT_TRUE(r.authentic);
}

TEST(Watermark, OneFlippedLsbFlagsOneBlock) {
  Fixture s = setup("CS_I");
  Image marked = embed(synthetic_cover(1), synthetic_watermark(), kKappa, s.basis, kKey, s.cfg);
  // (0,0) is the first zigzag slot, so it carries a signature bit.
  marked.at(8 * 10, 8 * 20, 0) ^= 1;
  ExtractResult r = extract(marked, s.basis, kKey, s.cfg, kKappa);
  EXPECT_FALSE(r.authentic);
  EXPECT_EQ(flagged(r), 1);
  EXPECT_EQ(r.tamper_map.at(10, 20), 1);
}

TEST(Watermark, OverwrittenRegionFlagsOverlappedBlocks) {
  Fixture s = setup("MS_I");
  Image marked = embed(synthetic_cover(3), synthetic_watermark(), kKappa, s.basis, kKey, s.cfg);
  for (int r = 100; r < 164; ++r)
    for (int c = 200; c < 264; ++c)
      for (int ch = 0; ch < 3; ++ch) marked.at(r, c, ch) = static_cast<std::uint8_t>((r * 7 + c * 13 + ch) & 255);
  ExtractResult res = extract(marked, s.basis, kKey, s.cfg, kKappa);
  EXPECT_FALSE(res.authentic);
  for (int br = 0; br < 64; ++br)
    for (int bc = 0; bc < 64; ++bc) {
      const bool inside = br >= 12 && br <= 20 && bc >= 25 && bc <= 32;
      if (!inside) EXPECT_EQ(res.tamper_map.at(br, bc), 0) << br << "," << bc;
    }
  EXPECT_GE(flagged(res), 7 * 8);
}

TEST(Watermark, WrongKappaFlagsEverything) {
  Fixture s = setup("CS_I");
  Image marked = embed(synthetic_cover(0), synthetic_watermark(), kKappa, s.basis, kKey, s.cfg);
  ExtractResult r = extract(marked, s.basis, kKey, s.cfg, "another kappa");
  EXPECT_FALSE(r.authentic);
  EXPECT_EQ(flagged(r), 64 * 64);
}

TEST(Watermark, WrongChaosKeyScramblesBits) {
  Fixture s = setup("CS_I");
  const BitMatrix wm = synthetic_watermark();
  Image marked = embed(synthetic_cover(2), wm, kKappa, s.basis, kKey, s.cfg);
  ExtractResult r = extract(marked, s.basis, ChaosKey{kKey.x0 + 1e-10, kKey.mu_c}, s.cfg, kKappa);
  const double b = ber(wm, r.robust);
  EXPECT_GT(b, 0.4);
  EXPECT_LT(b, 0.6);
}

TEST(Watermark, SizeAndCapacityErrors) {
  Fixture s = setup("CS_I");
  const BitMatrix wm = synthetic_watermark();
  EXPECT_THROW(embed(Image(100, 100, 3), wm, kKappa, s.basis, kKey, s.cfg), SizeError);
  EXPECT_THROW(embed(Image(256, 256, 3), wm, kKappa, s.basis, kKey, s.cfg), CapacityError);
  EXPECT_THROW(embed(Image(512, 512, 3), BitMatrix(32, 32), kKappa, s.basis, kKey, s.cfg), DimensionError);
}

TEST(Watermark, LargerCoverSignsEveryBlock) {
  Fixture s = setup("CS_II");
  Image cover(512, 576, 3);
  for (size_t i = 0; i < cover.data.size(); ++i) cover.data[i] = static_cast<std::uint8_t>(40 + i % 151);
  const BitMatrix wm = synthetic_watermark();
  Image marked = embed(cover, wm, kKappa, s.basis, kKey, s.cfg);
  ExtractResult r = extract(marked, s.basis, kKey, s.cfg, kKappa);
  EXPECT_EQ(r.tamper_map.cols, 72);
  EXPECT_TRUE(r.authentic);
  EXPECT_EQ(ber(wm, r.robust), 0.0);
  marked.at(504, 568, 2) ^= 1;
  EXPECT_EQ(extract(marked, s.basis, kKey, s.cfg, kKappa).tamper_map.at(63, 71), 1);
}
