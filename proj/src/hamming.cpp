#include "amcsp/hamming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "amcsp/error.hpp"

namespace amcsp {

std::size_t hamming_distance(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) {
    throw ValidationError("hamming_distance: length mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] != y[i]);
  return d;
}

std::optional<std::size_t> set_distance(const BitString& x, std::span<const BitString> set) {
  std::optional<std::size_t> best;
  for (const auto& s : set) {
    const std::size_t d = hamming_distance(x, s);
    if (!best || d < *best) best = d;
    if (d == 0) break;
  }
  return best;
}

double entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("entropy: argument outside [0,1]");
  if (t == 0.0 || t == 1.0) return 0.0;
  return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
}

double entropy(const Rational& t) {
  if (t < 0 || t > 1) throw ValidationError("entropy: argument outside [0,1]");
  return entropy(to_double(t));
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c *= (n - k + i);
    c /= i;
  }
  return c;
}

BigInt sphere_volume(std::size_t n, std::size_t k) {
  if (n == 0) throw ValidationError("sphere_volume: n must be positive");
  if (k > n) throw ValidationError("sphere_volume: radius exceeds length");
  BigInt total = 0;
  BigInt c = 1;  // C(n, 0)
  for (std::size_t i = 0; i <= k; ++i) {
    total += c;
    c = c * (n - i) / (i + 1);
  }
  return total;
}

BallSampler::BallSampler(std::size_t length, std::size_t radius, std::uint64_t seed)
    : length_(length), radius_(radius), rng_(seed) {
  if (length == 0) throw ValidationError("BallSampler: length must be positive");
  if (length > 63) throw LimitError("BallSampler: length above 63 is not supported");
  if (radius > length) throw ValidationError("BallSampler: radius exceeds length");
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j <= radius; ++j) {
    acc += binomial(length, j).convert_to<std::uint64_t>();
    cumulative_.push_back(acc);
  }
  scratch_.resize(length);
}

BitString BallSampler::sample() {
  const std::uint64_t u = rng_.below(cumulative_.back());
  const auto weight = static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
  // Partial Fisher-Yates over positions.
  std::iota(scratch_.begin(), scratch_.end(), std::size_t{0});
  BitString v(length_);
  for (std::size_t i = 0; i < weight; ++i) {
    const std::size_t j = i + rng_.below(length_ - i);
    std::swap(scratch_[i], scratch_[j]);
    v.set(scratch_[i], true);
  }
  return v;
}

}  // namespace amcsp
