#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amcsp/bits.hpp"

namespace amcsp {

enum class GateOp : std::uint8_t { And, Or, Not, Xor, Const0, Const1 };

std::string_view gate_op_name(GateOp op);
std::optional<GateOp> parse_gate_op(std::string_view name);
int gate_arity(GateOp op);

using WireId = std::uint32_t;

struct Gate {
  GateOp op;
  WireId a = 0;
  WireId b = 0;
};

// Fan-in-two Boolean circuit C(r, w). Wires 0..l-1 are the r inputs,
// l..l+N-1 the w inputs, and gate i drives wire l+N+i. Gates may only read
// inputs or earlier gates, so the gate list is a topological order.
class Circuit {
 public:
  Circuit() = default;
  Circuit(std::size_t r_len, std::size_t w_len, std::string name = {});

  std::size_t r_len() const { return r_len_; }
  std::size_t w_len() const { return w_len_; }
  std::size_t num_inputs() const { return r_len_ + w_len_; }
  std::size_t num_wires() const { return num_inputs() + gates_.size(); }
  // |C|: the gate count.
  std::size_t size() const { return gates_.size(); }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  WireId r(std::size_t j) const;
  WireId w(std::size_t j) const;
  WireId add_gate(GateOp op, WireId a = 0, WireId b = 0);
  void set_output(WireId wire);
  WireId output() const;
  bool has_output() const { return output_.has_value(); }

  const std::vector<Gate>& gates() const { return gates_; }

  // Throws ValidationError when a gate references a later wire or the
  // output is missing.
  void validate() const;

  bool eval(const BitString& r, const BitString& w) const;
  // x is the concatenation (r, w).
  bool eval(const BitString& x) const;
  // Bit-sliced evaluation: lane i of each input word is one assignment.
  std::uint64_t eval_lanes(std::span<const std::uint64_t> inputs,
                           std::vector<std::uint64_t>& scratch) const;

  friend bool operator==(const Circuit& a, const Circuit& b);

 private:
  std::size_t r_len_ = 0;
  std::size_t w_len_ = 0;
  std::string name_;
  std::vector<Gate> gates_;
  std::optional<WireId> output_;
};

// Gate emitter with constant folding and trivial-identity simplification.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(Circuit& circuit) : c_(circuit) {}

  Circuit& circuit() { return c_; }

  WireId zero();
  WireId one();
  WireId constant(bool value) { return value ? one() : zero(); }
  WireId not_(WireId a);
  WireId and_(WireId a, WireId b);
  WireId or_(WireId a, WireId b);
  WireId xor_(WireId a, WireId b);
  WireId xnor(WireId a, WireId b) { return not_(xor_(a, b)); }
  // sel ? if1 : if0
  WireId mux(WireId sel, WireId if0, WireId if1);
  WireId and_all(std::span<const WireId> wires);
  WireId or_all(std::span<const WireId> wires);
  WireId xor_all(std::span<const WireId> wires);
  WireId equal(std::span<const WireId> a, std::span<const WireId> b);

  // Little-endian (index 0 = least significant) arithmetic.
  std::vector<WireId> add_mod(std::span<const WireId> a, std::span<const WireId> b,
                              WireId carry_in);
  std::vector<WireId> add(std::span<const WireId> a, std::span<const WireId> b);
  // a >= constant, a little-endian.
  WireId at_least(std::span<const WireId> a, std::uint64_t threshold);
  std::vector<WireId> popcount(std::span<const WireId> bits);

  // Selects table[index] where index is given MSB-first by `select`.
  WireId lookup(std::span<const WireId> select, std::span<const std::uint8_t> table);

  // Copies sub's gates with its inputs bound to the given wires; returns the
  // wire carrying sub's output.
  WireId inline_circuit(const Circuit& sub, std::span<const WireId> inputs);

  std::optional<bool> constant_value(WireId w) const;

 private:
  WireId emit(GateOp op, WireId a = 0, WireId b = 0);
  Circuit& c_;
  std::optional<WireId> zero_;
  std::optional<WireId> one_;
};

struct SearchLimits {
  std::size_t max_witness_bits = 24;    // N for find_witness
  std::size_t max_challenge_bits = 20;  // l for sat_profile
};

// Lexicographically first w with C(r, w) = 1.
std::optional<BitString> find_witness(const Circuit& c, const BitString& r,
                                      const SearchLimits& limits = {});

// Every w with C(r, w) = 1, in lexicographic order.
std::vector<BitString> all_witnesses(const Circuit& c, const BitString& r,
                                     const SearchLimits& limits = {});

struct SatProfile {
  std::string circuit_name;
  std::size_t r_len = 0;
  std::vector<BitString> sat_r;      // lexicographic order
  std::vector<BitString> witnesses;  // witnesses[i] certifies sat_r[i]

  bool is_satisfiable(const BitString& r) const;
  // Distance from every r (indexed MSB-first) to sat_r; -1 encodes INFINITE.
  std::vector<int> distance_table() const;
};

SatProfile sat_profile(const Circuit& c, const SearchLimits& limits = {});

}  // namespace amcsp
