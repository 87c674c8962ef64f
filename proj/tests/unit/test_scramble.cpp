#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sobomark/chaos.hpp"
#include "sobomark/errors.hpp"
#include "sobomark/matrix.hpp"
#include "sobomark/zigzag.hpp"

using namespace sobomark;

namespace {

const ChaosKey kKey{0.3731, 0.2917};

BitMatrix random_bits(unsigned seed) {
  std::mt19937 rng(seed);
  BitMatrix m(64, 64);
  for (auto& b : m.bits) b = rng() & 1;
  return m;
}

}  // namespace

TEST(Pwlcm, Branches) {
  EXPECT_DOUBLE_EQ(pwlcm_next(0.1, 0.2), 0.5);
  EXPECT_NEAR(pwlcm_next(0.3, 0.25), 0.2, 1e-15);
  EXPECT_NEAR(pwlcm_next(0.7, 0.25), pwlcm_next(0.3, 0.25), 1e-15);
}

TEST(Pwlcm, StaysInsideOpenInterval) {
  EXPECT_GT(pwlcm_next(0.5, 0.25), 0.0);
  EXPECT_LT(pwlcm_next(0.5, 0.25), 1.0);
  EXPECT_LT(pwlcm_next(0.2, 0.2), 1.0);
  EXPECT_THROW(pwlcm_next(0.0, 0.25), DomainError);
  EXPECT_THROW(pwlcm_next(1.0, 0.25), DomainError);
}

TEST(ChaosKey, Validation) {
  EXPECT_THROW((ChaosKey{0.0, 0.2}.validate()), ParameterError);
  EXPECT_THROW((ChaosKey{0.4, 0.5}.validate()), ParameterError);
  EXPECT_THROW((ChaosKey{0.2, 0.2}.validate()), ParameterError);
  EXPECT_NO_THROW(kKey.validate());
}

TEST(Permutation, SingleElement) {
  EXPECT_EQ(chaotic_permutation(kKey, 1), std::vector<int>{0});
}

TEST(Permutation, IsBijection) {
  auto p = chaotic_permutation(kKey, 4096);
  std::vector<int> want(4096);
  std::iota(want.begin(), want.end(), 0);
  std::sort(p.begin(), p.end());
  EXPECT_EQ(p, want);
}

TEST(Permutation, DeterministicAndKeySensitive) {
  auto a = chaotic_permutation(kKey, 4096);
  EXPECT_EQ(a, chaotic_permutation(kKey, 4096));
  EXPECT_NE(a, chaotic_permutation(ChaosKey{kKey.x0 + 1e-10, kKey.mu_c}, 4096));
}

TEST(Scramble, RoundTrip) {
  auto w = random_bits(7);
  EXPECT_EQ(unscramble(scramble(w, kKey), kKey), w);
}

TEST(Scramble, ZeroStaysZero) {
  BitMatrix z(64, 64);
  EXPECT_EQ(scramble(z, kKey), z);
}

TEST(Scramble, PreservesPopulation) {
  auto w = random_bits(11);
  auto s = scramble(w, kKey);
  EXPECT_EQ(std::count(w.bits.begin(), w.bits.end(), 1), std::count(s.bits.begin(), s.bits.end(), 1));
}

TEST(Zigzag, JpegOrderPrefix) {
  Matrix b(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) b(r, c) = 8 * r + c;
  auto z = zigzag(b);
  const std::vector<double> head = {0, 1, 8, 16, 9, 2, 3, 10, 17, 24};
  EXPECT_TRUE(std::equal(head.begin(), head.end(), z.begin()));
  EXPECT_EQ(z[28], 7.0);
  EXPECT_EQ(z[63], 63.0);
}

TEST(Zigzag, InverseRoundTrip) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-100, 100);
  Matrix b(8, 8);
  for (double& v : b.data()) v = u(rng);
  EXPECT_EQ(inverse_zigzag(zigzag(b), 8), b);
}

TEST(Zigzag, SingleElement) {
  Matrix b(1, 1);
  b(0, 0) = 4.5;
  EXPECT_EQ(zigzag(b), std::vector<double>{4.5});
}
