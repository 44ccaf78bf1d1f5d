#include <gtest/gtest.h>

#include <map>

#include "amcsp/error.hpp"
#include "amcsp/hamming.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace amcsp;

TEST(HammingDistance, Examples) {
  EXPECT_EQ(hamming_distance(BitString::parse("0000"), BitString::parse("0000")), 0u);
  EXPECT_EQ(hamming_distance(BitString::parse("0101"), BitString::parse("0110")), 2u);
  EXPECT_EQ(hamming_distance(BitString::parse("1"), BitString::parse("0")), 1u);
  EXPECT_THROW(hamming_distance(BitString::parse("01"), BitString::parse("0")), ValidationError);
}

TEST(HammingDistance, MatchesOracle) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng.below(40);
    const auto a = gen::bits(rng, n), b = gen::bits(rng, n);
    ASSERT_EQ(hamming_distance(a, b), oracle::distance(a, b));
    ASSERT_EQ(hamming_distance(a, b), (a ^ b).weight());
  }
}

TEST(SetDistance, Examples) {
  const std::vector<BitString> s{BitString::parse("00"), BitString::parse("11")};
  EXPECT_EQ(set_distance(BitString::parse("00"), s), 0u);
  EXPECT_EQ(set_distance(BitString::parse("01"), s), 1u);
  EXPECT_FALSE(set_distance(BitString::parse("01"), {}).has_value());
}

TEST(SetDistance, TriangleInequality) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<BitString> s;
    for (std::size_t k = rng.below(5); k > 0; --k) s.push_back(gen::bits(rng, n));
    const auto x = gen::bits(rng, n), y = gen::bits(rng, n);
    const auto dx = set_distance(x, s), dy = set_distance(y, s);
    ASSERT_EQ(dx.has_value(), !s.empty());
    if (dx) {
      ASSERT_EQ(static_cast<long>(*dx), oracle::set_distance(x, s));
      ASSERT_LE(*dx, *dy + hamming_distance(x, y));
    }
  }
}

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy(0.5), 1.0);
  EXPECT_NEAR(entropy(0.25), 0.811278, 1e-6);
  EXPECT_NEAR(entropy(make_rational(7, 64)), oracle::entropy(7.0 / 64), 1e-12);
  EXPECT_THROW(entropy(-0.1), ValidationError);
  EXPECT_THROW(entropy(1.5), ValidationError);
}

TEST(Entropy, SymmetricAndConcave) {
  for (int i = 1; i < 100; ++i) {
    const double p = i / 100.0;
    ASSERT_NEAR(entropy(p), entropy(1 - p), 1e-12);
    ASSERT_NEAR(entropy(p), oracle::entropy(p), 1e-12);
    if (i < 50) ASSERT_LT(entropy(p), entropy(p + 0.01));
  }
}

TEST(SphereVolume, Examples) {
  EXPECT_EQ(sphere_volume(4, 0), 1);
  EXPECT_EQ(sphere_volume(4, 1), 5);
  EXPECT_EQ(sphere_volume(4, 4), 16);
  EXPECT_THROW(sphere_volume(0, 0), ValidationError);
  EXPECT_THROW(sphere_volume(3, 4), ValidationError);
}

TEST(SphereVolume, MatchesPascalAndEntropyBound) {
  for (std::size_t n = 1; n <= 30; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      ASSERT_EQ(sphere_volume(n, k), oracle::volume(n, k)) << n << "," << k;
      ASSERT_EQ(binomial(n, k), oracle::binomial(n, k));
      if (2 * k <= n) {
        const double log_v = std::log2(sphere_volume(n, k).convert_to<double>());
        ASSERT_LE(log_v, oracle::entropy(static_cast<double>(k) / n) * n + 1e-9) << n << "," << k;
      }
    }
  }
}

namespace {

// Chi-square statistic of `draws` samples against the uniform law on the ball.
double chi_square(std::size_t n, std::size_t k, std::size_t draws, std::uint64_t seed) {
  BallSampler s(n, k, seed);
  std::map<std::uint64_t, std::size_t> counts;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto v = s.sample();
    EXPECT_LE(v.weight(), k);
    ++counts[v.to_index()];
  }
  const double expected = static_cast<double>(draws) / static_cast<double>(s.volume());
  EXPECT_EQ(counts.size(), s.volume());
  double chi = 0;
  for (const auto& [v, c] : counts) chi += (c - expected) * (c - expected) / expected;
  return chi;
}

}  // namespace

TEST(BallSampler, RadiusZero) {
  BallSampler s(5, 0, 3);
  EXPECT_EQ(s.volume(), 1u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(s.sample(), BitString::parse("00000"));
}

TEST(BallSampler, UniformOnFullCube) {
  // 15 degrees of freedom; 37.7 is the 0.999 quantile.
  EXPECT_LT(chi_square(4, 4, 100000, 5), 37.7);
}

TEST(BallSampler, UniformOnRadiusOne) {
  // 4 degrees of freedom; 18.47 is the 0.999 quantile.
  EXPECT_LT(chi_square(4, 1, 100000, 6), 18.47);
}

TEST(BallSampler, UniformOnLargerBall) {
  // V(8,3) = 93, 92 degrees of freedom; 137.2 is about the 0.999 quantile.
  EXPECT_LT(chi_square(8, 3, 200000, 7), 137.2);
}

TEST(BallSampler, Deterministic) {
  BallSampler a(20, 6, 99), b(20, 6, 99);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.sample(), b.sample());
}

TEST(BallSampler, Limits) {
  EXPECT_THROW(BallSampler(64, 1, 0), LimitError);
  EXPECT_THROW(BallSampler(4, 5, 0), ValidationError);
  EXPECT_EQ(BallSampler(63, 2, 0).volume(), 1u + 63u + 63u * 62u / 2u);
}
