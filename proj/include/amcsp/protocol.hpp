#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amcsp/circuit.hpp"
#include "amcsp/csp.hpp"
#include "amcsp/expander.hpp"
#include "amcsp/rational.hpp"
#include "amcsp/reduction.hpp"

namespace amcsp {

// A public-coin protocol materialized for one instance x: the verifier
// circuit C_x(r, w) = M(x, r, w).
struct AmProtocol {
  std::string id;
  Circuit verifier;
  std::optional<bool> yes;            // instance label, if known
  Rational soundness_target{1, 3};
  bool perfect_completeness = true;
  std::string amplifier = "none";     // none | parallel | expander
  std::size_t repetitions = 1;
  bool experimental = false;
  std::size_t base_r_len = 0;         // challenge length before amplification

  std::size_t r_len() const { return verifier.r_len(); }
  std::size_t w_len() const { return verifier.w_len(); }
};

AmProtocol make_protocol(std::string id, Circuit verifier, std::optional<bool> yes = std::nullopt);

enum class MeasureMode { Exhaustive, Sampled };

struct SoundnessOptions {
  MeasureMode mode = MeasureMode::Exhaustive;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  SearchLimits limits;
};

struct SoundnessMeasurement {
  bool exhaustive = true;
  std::size_t samples = 0;
  std::size_t accepting = 0;   // r with some accepting w
  Rational value;              // accepting / samples
  double std_error = 0;
};

// Fraction of r for which some w makes the verifier accept.
SoundnessMeasurement measure_soundness(const AmProtocol& p, const SoundnessOptions& options = {});
bool check_completeness(const AmProtocol& p, const SearchLimits& limits = {});

// Appends `extra` challenge bits the verifier ignores.
AmProtocol pad_challenge(const AmProtocol& p, std::size_t extra);
// t independent copies: r = r^1..r^t, w = w^1..w^t, accept iff all accept.
AmProtocol parallel_repeat(const AmProtocol& p, std::size_t t);
// EXPERIMENTAL. Challenges are the vertices of a t-step walk on a Margulis
// graph with 2^l vertices; the seed is l + 3(t-1) bits.
AmProtocol expander_repeat(const AmProtocol& p, const ExpanderGraph& g, std::size_t t);

// Accept iff the first `checked` bits of r equal `secret` and w echoes the
// first N bits of r (N <= l). Soundness 2^-checked.
AmProtocol secret_protocol(std::string id, const BitString& secret, std::size_t checked,
                           std::size_t witness_bits);
// w names a member of S (a bitmap over {0,1}^n) whose first l bits equal r.
AmProtocol set_size_protocol(std::string id, std::size_t l, std::size_t n,
                             const std::vector<std::uint8_t>& members);
// `satisfiable` challenges chosen at random, each with one planted witness.
AmProtocol planted_protocol(std::string id, std::size_t l, std::size_t witness_bits,
                            std::size_t satisfiable, std::uint64_t seed);
// M = 1.
AmProtocol trivial_protocol(std::string id, std::size_t l, std::size_t witness_bits);

// Small labelled YES/NO instances of each family.
std::vector<AmProtocol> toy_corpus(std::uint64_t seed);

struct PipelineOptions {
  std::string amplifier = "parallel";  // parallel | expander
  std::size_t t = 1;
  ReductionOptions reduction;
};

struct PipelineResult {
  AmProtocol amplified;
  ReductionOutput reduction;
};

PipelineResult theorem1_pipeline(const AmProtocol& p, const PipelineOptions& options = {});

struct PipelineAnalysis {
  std::size_t l2 = 0;                // amplified challenge length
  std::size_t satisfiable = 0;       // r2 with C(r2, .) satisfiable
  std::size_t l1 = 0;                // largest l1 with soundness <= 2^-l1
  double D = 0;                      // l2 / l1 (infinite when l1 = 0)
  double D_effective = 0;            // l2 / log2(1/soundness)
  Rational alpha;                    // H(alpha) < 1/D
  std::size_t radius = 0;            // floor(alpha l2)
  Rational c_meas;
  bool c_measured = false;           // false: fell back to the structural b*l/m
  Rational eps_meas;                 // c_meas (radius + 1) / l2
  GapProfile profile;
  Rational fraction_full;
  Rational fraction_above;           // max Val > 1 - eps_meas
  Rational bound;                    // V(l2, radius) 2^{(1 - 1/D) l2} / 2^l2
  bool bound_applies = false;        // l1 >= 1
  Verdict verdict = Verdict::Neither;
};

PipelineAnalysis analyze_pipeline(const PipelineResult& result,
                                  std::size_t max_exhaustive_bits = 20);

// Largest i/64 (then i/1024) with H(alpha) < 1/D; nullopt when none.
std::optional<Rational> choose_alpha(double D);

}  // namespace amcsp
