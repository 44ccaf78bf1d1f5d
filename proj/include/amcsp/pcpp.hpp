#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amcsp/circuit.hpp"
#include "amcsp/csp.hpp"
#include "amcsp/rational.hpp"

namespace amcsp {

// A 2-CSP psi(x, z) testing proximity of x to C^{-1}(1). Arthur-variable i
// of `csp` is circuit input i (the r-block followed by the w-block); the
// Merlin-variables are the proof z.
struct PcppOutput {
  Csp csp;
  Rational claimed_beta;
  std::size_t alphabet_size = 0;
  std::size_t proof_size = 0;
  std::string backend;
  // False when the alphabet grows with the circuit (enumerative backend).
  bool constant_alphabet = false;
  // Honest proof for x in C^{-1}(1); nullopt when C(x) = 0.
  std::function<std::optional<std::vector<Symbol>>(const BitString&)> honest_proof;
};

struct PcppBuildOptions {
  // Largest circuit input count enumerated by brute force.
  std::size_t max_inputs = 20;
  // Optional externally enumerated C^{-1}(1). Every member is verified with
  // eval_circuit; exhaustiveness is the caller's responsibility.
  const std::vector<BitString>* accepting = nullptr;
};

class PcppBackend {
 public:
  virtual ~PcppBackend() = default;
  virtual std::string id() const = 0;
  virtual PcppOutput build(const Circuit& c, const PcppBuildOptions& options) const = 0;
};

void register_pcpp_backend(std::shared_ptr<const PcppBackend> backend);
std::shared_ptr<const PcppBackend> find_pcpp_backend(const std::string& id);
std::vector<std::string> pcpp_backend_ids();

// All x with C(x) = 1, lexicographic.
std::vector<BitString> enumerate_accepting(const Circuit& c, std::size_t max_inputs);

// One proof variable z ranging over C^{-1}(1); for every input position i a
// constraint (z, x_i) requiring x_i to equal bit i of the z-th accepting
// input. For C^{-1}(1) empty: one always-false constraint, alphabet size 1.
PcppOutput build_enumerative_pcpp(const Circuit& c, std::size_t max_inputs = 20);
PcppOutput build_enumerative_pcpp(const Circuit& c, std::vector<BitString> accepting);

PcppOutput build_pcpp(const Circuit& c, const std::string& backend,
                      const PcppBuildOptions& options = {});

// Measured security: min over x with 0 < d(x, C^{-1}(1)) < INFINITE of
// n * (1 - max_z Val(x, z)) / d. `vacuous` (the MAX sentinel) when no such x.
struct Security {
  bool vacuous = true;
  Rational beta;
};

Security certify_security(const Circuit& c, const PcppOutput& p, std::size_t max_inputs = 20);

// Checks completeness via honest proofs and soundness against claimed_beta
// for every x; for unsatisfiable C requires max_z Val <= 1 - claimed_beta.
// Returns a description of the first violation, or nullopt.
std::optional<std::string> check_pcpp_contract(const Circuit& c, const PcppOutput& p,
                                               std::size_t max_inputs = 20);

}  // namespace amcsp
