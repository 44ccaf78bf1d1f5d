#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amcsp/circuit.hpp"
#include "amcsp/codes.hpp"
#include "amcsp/csp.hpp"
#include "amcsp/hamming.hpp"
#include "amcsp/pcpp.hpp"
#include "amcsp/rational.hpp"
#include "amcsp/replicated_q.hpp"

namespace amcsp {

struct ReductionParams {
  Rational epsilon;
  Rational gamma;   // H(gamma) <= epsilon
  Rational nu;      // eta * beta * gamma / 4
  Rational beta;
  Rational eta;
  std::size_t blocks = 0;
  Symbol u_alphabet = 3;  // {0, 1} plus non-Boolean symbols
};

// gamma is the largest i/64 (1 <= i <= 32) with H(gamma) <= eps, falling back
// to the grid i/1024 (1 <= i <= 512). blocks is left 0.
ReductionParams choose_parameters(const Rational& eps, const Rational& eta, const Rational& beta);

struct ReductionOptions {
  std::string code = "rs";
  std::string backend = "enumerative";
  Rational epsilon{1, 2};
  Symbol u_alphabet = 3;
  SearchLimits limits;
  // Refuse when |Q^{-1}(1)| would exceed this.
  std::size_t max_accepting = std::size_t{1} << 20;
};

// psi(r, u, Z): variables are r (l Arthur bits), then u (N' Merlin vars over
// u_alphabet), then the backend proof Z.
struct ReductionOutput {
  Csp psi;
  ReductionParams params;
  Circuit source;               // C with w padded to at least l bits
  std::size_t witness_bits = 0; // N before padding
  CodeSpec code;
  ReplicatedQ q;
  PcppOutput pcpp;
  bool fast_path = false;

  std::size_t r_len() const { return source.r_len(); }
  std::size_t u_count() const { return code.codeword_bits; }
  std::size_t proof_count() const { return pcpp.csp.merlin_count(); }
  // Merlin index of u_j / Z_i.
  std::size_t u_index(std::size_t j) const { return j; }
  std::size_t z_index(std::size_t i) const { return u_count() + i; }
};

// Q^{-1}(1) listed as (r, ..., r, E(w)) over every C(r, w) = 1, lexicographic.
std::vector<BitString> replicated_accepting(const Circuit& padded, const CodeSpec& code,
                                            std::size_t blocks, const SearchLimits& limits,
                                            std::size_t max_accepting);

ReductionOutput build_stochastic_csp(const Circuit& c, const ReductionOptions& options = {});

// z = (u, Z) with u = E(w) and Z the backend's honest proof for (r^b, u).
std::vector<Symbol> honest_proof(const ReductionOutput& out, const BitString& r,
                                 const BitString& w);

// u Booleanized (non-Boolean -> 0) and decoded; all-zero w on decode failure.
// The result has the original witness length N.
BitString decoding_prover(const ReductionOutput& out, const BitString& r,
                          const std::vector<Symbol>& z);

using Prover = std::function<std::vector<Symbol>(const BitString& r)>;

struct SmoothedReport {
  std::size_t radius = 0;        // floor(gamma * l)
  std::uint64_t ball_volume = 0;
  Rational base_success;         // fraction of r with C(r, P'(r, P(r))) = 1
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0;
  double std_error = 0;
  double bound = 0;              // base_success * 2^{-H(gamma) l}
  // Max over fixed v in the ball of the exact success fraction over all r;
  // only computed when 2^l * |ball| <= 2^24.
  std::optional<Rational> best_fixed_rate;
  BitString best_fixed_v;
};

// One draw of P~(r): v uniform in the ball of radius floor(gamma * l), then
// P'(r + v, P(r + v)).
BitString smoothed_prover(const ReductionOutput& out, const Prover& p, const BitString& r,
                          BallSampler& ball);

SmoothedReport measure_smoothed_prover(const ReductionOutput& out, const Prover& p,
                                       std::size_t trials, std::uint64_t seed);

// Min over r at finite distance d* >= 1 from the satisfiable set of
// l * (1 - max Val(r)) / d*. nullopt when no such r exists.
std::optional<Rational> soundness_constant(const ReductionOutput& out, const GapProfile& profile,
                                           const std::vector<int>& distance);

// Every z with Val(r, z) > 1 - nu must decode through P' to a w with
// C(r', w) = 1 for some d(r, r') < gamma * l. Enumerates such z exactly via
// the star structure.
struct ChainReport {
  std::size_t assignments = 0;  // high-Val z examined
  std::size_t failures = 0;
  std::optional<std::string> first_failure;
};

ChainReport check_decoding_chain(const ReductionOutput& out, std::size_t max_assignments = 1u << 24);

}  // namespace amcsp
