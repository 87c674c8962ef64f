#include <gtest/gtest.h>

#include <cmath>

#include "sobomark/errors.hpp"
#include "sobomark/metrics.hpp"

using namespace sobomark;

TEST(Psnr, IdenticalIsInfinite) {
  Image a(8, 8, 3);
  std::fill(a.data.begin(), a.data.end(), 9);
  auto r = psnr(a, a);
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_TRUE(std::isinf(r.psnr_db));
}

TEST(Psnr, SingleFullScaleError) {
  Image a(512, 512, 3), b(512, 512, 3);
  b.data[12345] = 255;
  EXPECT_NEAR(psnr(a, b).psnr_db, 10 * std::log10(512.0 * 512 * 3), 1e-9);
  EXPECT_NEAR(psnr(a, b).psnr_db, 58.96, 0.01);
}

TEST(Psnr, UnitOffset) {
  Image a(64, 64, 3), b(64, 64, 3);
  for (size_t i = 0; i < a.data.size(); ++i) {
    a.data[i] = static_cast<std::uint8_t>(i % 255);
    b.data[i] = static_cast<std::uint8_t>(i % 255 + 1);
  }
  auto r = psnr(a, b);
  EXPECT_DOUBLE_EQ(r.mse, 1.0);
  EXPECT_NEAR(r.psnr_db, 48.13, 0.01);
}

TEST(Psnr, ShapeMismatch) {
  EXPECT_THROW(psnr(Image(8, 8, 3), Image(8, 8, 1)), DimensionError);
}

TEST(Ber, Examples) {
  BitMatrix a(4, 4), b(4, 4);
  EXPECT_EQ(ber(a, a), 0.0);
  for (auto& v : b.bits) v = 1;
  EXPECT_EQ(ber(a, b), 1.0);
  for (size_t i = 0; i < 8; ++i) b.bits[i] = 0;
  EXPECT_EQ(ber(a, b), 0.5);
  EXPECT_THROW(ber(a, BitMatrix(2, 2)), DimensionError);
}
