#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amcsp/bits.hpp"
#include "amcsp/circuit.hpp"
#include "amcsp/expander.hpp"
#include "amcsp/hamming.hpp"
#include "amcsp/rational.hpp"

namespace amcsp {

// Offset families for the r_b half of the seed.
//   zero      no offset, r_b empty
//   rotation  offset i is r_b (block_len bits) rotated left by i
//   affine    offset i is A * bin(i) + c over GF(2); pairwise independent
enum class OffsetFamily { Zero, Rotation, Affine };

std::string to_string(OffsetFamily f);
OffsetFamily parse_offset_family(const std::string& name);

// Block i of the output is walk vertex i XOR offset i. The walk runs on a
// Margulis graph with 2^block_len vertices (block_len even), vertex bits
// x || y. Seed layout: r = r_a || r_b, r_a = start vertex || 3-bit ports.
struct GeneratorSpec {
  std::size_t block_len = 0;
  std::size_t k = 0;
  ExpanderGraph graph;
  OffsetFamily offsets = OffsetFamily::Zero;

  std::size_t walk_bits() const;    // |r_a|
  std::size_t offset_bits() const;  // |r_b|
  std::size_t seed_bits() const { return walk_bits() + offset_bits(); }
  // ceil(log2 k), at least 1: index width for the affine family.
  std::size_t index_bits() const;
};

GeneratorSpec make_generator(std::size_t block_len, std::size_t k, OffsetFamily offsets);

std::vector<BitString> walk_blocks(const GeneratorSpec& spec, const BitString& r_a);
std::vector<BitString> offset_blocks(const GeneratorSpec& spec, const BitString& r_b);
std::vector<BitString> g_iw(const GeneratorSpec& spec, const BitString& r);

// Membership table over {0,1}^block_len, indexed MSB-first. Witnesses follow
// the "echo" relation: w = (claim bit, x') with |w| = block_len + 1.
//   total relation  accepts iff x' = x and claim = L(x)
//   NP relation     accepts iff x' = x, claim = 1 and x in L
struct ToyLanguage {
  std::size_t block_len = 0;
  std::vector<std::uint8_t> member;
  std::string description;
  bool has_witnesses = true;

  bool contains(const BitString& x) const;
  std::size_t members() const;
  Rational density() const;
  std::size_t witness_bits() const { return block_len + 1; }
};

ToyLanguage language_everything(std::size_t block_len);
ToyLanguage language_empty(std::size_t block_len);
ToyLanguage language_parity(std::size_t block_len);
ToyLanguage language_majority(std::size_t block_len);
// Exactly round(density * 2^block_len) members chosen uniformly.
ToyLanguage language_random(std::size_t block_len, std::uint64_t seed, const Rational& density);
// Hex digits MSB-first; bit i of the bitmap is membership of x = i.
ToyLanguage language_bitmap(std::size_t block_len, const std::string& hex);
std::string bitmap_hex(const ToyLanguage& L);

bool total_witness_accepts(const ToyLanguage& L, const BitString& x, const BitString& w);
bool np_witness_accepts(const ToyLanguage& L, const BitString& x, const BitString& w);
BitString honest_witness(const ToyLanguage& L, const BitString& x);

BitString l_compose(const ToyLanguage& L, const GeneratorSpec& spec, const BitString& r);
std::size_t sharp(const ToyLanguage& L, const GeneratorSpec& spec, const BitString& r);
// Blocks whose NP witness verifies.
std::size_t sharp_C(const ToyLanguage& L, const GeneratorSpec& spec, const BitString& r,
                    const std::vector<BitString>& witnesses);

struct ConditionalCheck {
  BitString r_b;
  DeviationResult deviation;
};

struct ConcentrationResult {
  DeviationResult overall;   // |sharp(r) - c k| >= delta k over uniform r
  double lambda = 0;
  double bound = 0;          // chernoff_bound(delta, lambda, k)
  std::vector<ConditionalCheck> conditional;  // r_a uniform, r_b fixed
};

ConcentrationResult concentration_experiment(const ToyLanguage& L, const GeneratorSpec& spec,
                                             double delta, std::size_t trials, std::uint64_t seed,
                                             std::size_t rb_samples = 16);

// Q(r, w_1..w_k) = AND_i total(G_i(r), w_i). Inputs: r then the k witnesses.
Circuit build_Q_conp(const ToyLanguage& L, const GeneratorSpec& spec);
// Q(r, w_1..w_k) = [#{i : NP(G_i(r), w_i)} >= ceil(eta k)], 0 < eta < 1.
Circuit build_Q_threshold(const ToyLanguage& L, const GeneratorSpec& spec, const Rational& eta);

// The claim bit of each witness block in a concatenated tuple.
BitString claim_bits_extract(const ToyLanguage& L, std::size_t k, const BitString& witnesses);

// Characteristic vector of I union J, J uniform among subsets of [k] with
// |J| < alpha k (the ball of radius ceil(alpha k) - 1).
class SubsetGuesser {
 public:
  SubsetGuesser(std::size_t k, const Rational& alpha, std::uint64_t seed);
  std::size_t radius() const { return ball_.radius(); }
  std::uint64_t admissible() const { return ball_.volume(); }
  BitString guess(const BitString& accepted);

 private:
  std::size_t k_;
  BallSampler ball_;
};

BitString guess_with_subset(const BitString& accepted, std::size_t k, const Rational& alpha,
                            std::uint64_t seed);

// Exact Pr[I union J = target] for the guesser above.
Rational guess_success_exact(const BitString& accepted, const BitString& target,
                             const Rational& alpha);

}  // namespace amcsp
