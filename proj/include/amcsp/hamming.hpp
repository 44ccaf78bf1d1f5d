#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amcsp/bits.hpp"
#include "amcsp/rational.hpp"
#include "amcsp/rng.hpp"

namespace amcsp {

std::size_t hamming_distance(const BitString& x, const BitString& y);

// Distance from x to the nearest member of S. nullopt stands for the
// INFINITE distance to the empty set, which compares farther than any
// finite threshold.
std::optional<std::size_t> set_distance(const BitString& x, std::span<const BitString> set);

// Binary entropy in bits, H(0) = H(1) = 0.
double entropy(double t);
double entropy(const Rational& t);

// Exact number of points in {0,1}^n at Hamming weight <= k.
BigInt sphere_volume(std::size_t n, std::size_t k);

// Exact C(n, k).
BigInt binomial(std::size_t n, std::size_t k);

// Uniform sampler over the Hamming ball of radius k in {0,1}^length. A weight
// j is drawn with probability C(length, j) / V(length, k) using exact integer
// thresholds, then a uniform weight-j vector. length is capped at 63 so that
// the ball volume fits the 64-bit uniform draw.
class BallSampler {
 public:
  BallSampler(std::size_t length, std::size_t radius, std::uint64_t seed);

  std::size_t length() const { return length_; }
  std::size_t radius() const { return radius_; }
  std::uint64_t volume() const { return cumulative_.back(); }

  BitString sample();

 private:
  std::size_t length_;
  std::size_t radius_;
  std::vector<std::uint64_t> cumulative_;  // cumulative_[j] = V(length, j)
  Rng rng_;
  std::vector<std::size_t> scratch_;
};

inline BitString sample_ball(BallSampler& sampler) { return sampler.sample(); }

}  // namespace amcsp
