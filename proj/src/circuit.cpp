#include "amcsp/circuit.hpp"

#include <algorithm>
#include <deque>

#include "amcsp/error.hpp"
#include "amcsp/parallel.hpp"

namespace amcsp {

std::string_view gate_op_name(GateOp op) {
  switch (op) {
    case GateOp::And: return "AND";
    case GateOp::Or: return "OR";
    case GateOp::Not: return "NOT";
    case GateOp::Xor: return "XOR";
    case GateOp::Const0: return "CONST0";
    case GateOp::Const1: return "CONST1";
  }
  return "?";
}

std::optional<GateOp> parse_gate_op(std::string_view name) {
  for (GateOp op : {GateOp::And, GateOp::Or, GateOp::Not, GateOp::Xor, GateOp::Const0,
                    GateOp::Const1}) {
    if (gate_op_name(op) == name) return op;
  }
  return std::nullopt;
}

int gate_arity(GateOp op) {
  switch (op) {
    case GateOp::And:
    case GateOp::Or:
    case GateOp::Xor: return 2;
    case GateOp::Not: return 1;
    default: return 0;
  }
}

Circuit::Circuit(std::size_t r_len, std::size_t w_len, std::string name)
    : r_len_(r_len), w_len_(w_len), name_(std::move(name)) {}

WireId Circuit::r(std::size_t j) const {
  if (j >= r_len_) throw ValidationError("Circuit::r index out of range");
  return static_cast<WireId>(j);
}

WireId Circuit::w(std::size_t j) const {
  if (j >= w_len_) throw ValidationError("Circuit::w index out of range");
  return static_cast<WireId>(r_len_ + j);
}

WireId Circuit::add_gate(GateOp op, WireId a, WireId b) {
  const auto next = static_cast<WireId>(num_wires());
  const int arity = gate_arity(op);
  if ((arity >= 1 && a >= next) || (arity >= 2 && b >= next)) {
    throw ValidationError("Circuit::add_gate: operand is not an earlier wire");
  }
  gates_.push_back(Gate{op, arity >= 1 ? a : 0, arity >= 2 ? b : 0});
  return next;
}

void Circuit::set_output(WireId wire) {
  if (wire >= num_wires()) throw ValidationError("Circuit::set_output: unknown wire");
  output_ = wire;
}

WireId Circuit::output() const {
  if (!output_) throw ValidationError("circuit has no output");
  return *output_;
}

void Circuit::validate() const {
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const auto self = static_cast<WireId>(num_inputs() + i);
    const int arity = gate_arity(gates_[i].op);
    if ((arity >= 1 && gates_[i].a >= self) || (arity >= 2 && gates_[i].b >= self)) {
      throw ValidationError("gate " + std::to_string(i) + " references a later wire");
    }
  }
  if (!output_) throw ValidationError("circuit has no output");
  if (*output_ >= num_wires()) throw ValidationError("output references an unknown wire");
}

bool Circuit::eval(const BitString& r, const BitString& w) const {
  if (r.size() != r_len_ || w.size() != w_len_) {
    throw ValidationError("eval_circuit: expected |r|=" + std::to_string(r_len_) + ", |w|=" +
                          std::to_string(w_len_) + " but got " + std::to_string(r.size()) +
                          ", " + std::to_string(w.size()));
  }
  std::vector<std::uint8_t> wires(num_wires());
  for (std::size_t j = 0; j < r_len_; ++j) wires[j] = r[j];
  for (std::size_t j = 0; j < w_len_; ++j) wires[r_len_ + j] = w[j];
  std::size_t k = num_inputs();
  for (const Gate& g : gates_) {
    std::uint8_t v = 0;
    switch (g.op) {
      case GateOp::And: v = wires[g.a] & wires[g.b]; break;
      case GateOp::Or: v = wires[g.a] | wires[g.b]; break;
      case GateOp::Xor: v = wires[g.a] ^ wires[g.b]; break;
      case GateOp::Not: v = wires[g.a] ^ 1U; break;
      case GateOp::Const0: v = 0; break;
      case GateOp::Const1: v = 1; break;
    }
    wires[k++] = v;
  }
  return wires[output()] != 0;
}

bool Circuit::eval(const BitString& x) const {
  if (x.size() != num_inputs()) throw ValidationError("eval_circuit: input length mismatch");
  return eval(x.slice(0, r_len_), x.slice(r_len_, w_len_));
}

std::uint64_t Circuit::eval_lanes(std::span<const std::uint64_t> inputs,
                                  std::vector<std::uint64_t>& scratch) const {
  if (inputs.size() != num_inputs()) throw ValidationError("eval_lanes: input count mismatch");
  scratch.resize(num_wires());
  std::copy(inputs.begin(), inputs.end(), scratch.begin());
  std::size_t k = num_inputs();
  for (const Gate& g : gates_) {
    std::uint64_t v = 0;
    switch (g.op) {
      case GateOp::And: v = scratch[g.a] & scratch[g.b]; break;
      case GateOp::Or: v = scratch[g.a] | scratch[g.b]; break;
      case GateOp::Xor: v = scratch[g.a] ^ scratch[g.b]; break;
      case GateOp::Not: v = ~scratch[g.a]; break;
      case GateOp::Const0: v = 0; break;
      case GateOp::Const1: v = ~std::uint64_t{0}; break;
    }
    scratch[k++] = v;
  }
  return scratch[output()];
}

bool operator==(const Circuit& a, const Circuit& b) {
  if (a.r_len_ != b.r_len_ || a.w_len_ != b.w_len_ || a.output_ != b.output_ ||
      a.gates_.size() != b.gates_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.gates_.size(); ++i) {
    const Gate& x = a.gates_[i];
    const Gate& y = b.gates_[i];
    if (x.op != y.op || x.a != y.a || x.b != y.b) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// CircuitBuilder

std::optional<bool> CircuitBuilder::constant_value(WireId w) const {
  if (w < c_.num_inputs()) return std::nullopt;
  const GateOp op = c_.gates()[w - c_.num_inputs()].op;
  if (op == GateOp::Const0) return false;
  if (op == GateOp::Const1) return true;
  return std::nullopt;
}

WireId CircuitBuilder::emit(GateOp op, WireId a, WireId b) { return c_.add_gate(op, a, b); }

WireId CircuitBuilder::zero() {
  if (!zero_) zero_ = emit(GateOp::Const0);
  return *zero_;
}

WireId CircuitBuilder::one() {
  if (!one_) one_ = emit(GateOp::Const1);
  return *one_;
}

WireId CircuitBuilder::not_(WireId a) {
  if (auto k = constant_value(a)) return constant(!*k);
  if (a >= c_.num_inputs()) {
    const Gate& g = c_.gates()[a - c_.num_inputs()];
    if (g.op == GateOp::Not) return g.a;
  }
  return emit(GateOp::Not, a);
}

WireId CircuitBuilder::and_(WireId a, WireId b) {
  const auto ka = constant_value(a);
  const auto kb = constant_value(b);
  if (ka) return *ka ? b : zero();
  if (kb) return *kb ? a : zero();
  if (a == b) return a;
  return emit(GateOp::And, a, b);
}

WireId CircuitBuilder::or_(WireId a, WireId b) {
  const auto ka = constant_value(a);
  const auto kb = constant_value(b);
  if (ka) return *ka ? one() : b;
  if (kb) return *kb ? one() : a;
  if (a == b) return a;
  return emit(GateOp::Or, a, b);
}

WireId CircuitBuilder::xor_(WireId a, WireId b) {
  const auto ka = constant_value(a);
  const auto kb = constant_value(b);
  if (ka) return *ka ? not_(b) : b;
  if (kb) return *kb ? not_(a) : a;
  if (a == b) return zero();
  return emit(GateOp::Xor, a, b);
}

WireId CircuitBuilder::mux(WireId sel, WireId if0, WireId if1) {
  if (auto k = constant_value(sel)) return *k ? if1 : if0;
  if (if0 == if1) return if0;
  const auto k0 = constant_value(if0);
  const auto k1 = constant_value(if1);
  if (k0 && k1) return *k1 ? sel : not_(sel);  // the constants differ here
  if (k0) return *k0 ? or_(not_(sel), if1) : and_(sel, if1);
  if (k1) return *k1 ? or_(sel, if0) : and_(not_(sel), if0);
  // if0 ^ (sel & (if0 ^ if1))
  return xor_(if0, and_(sel, xor_(if0, if1)));
}

namespace {

template <class Combine>
WireId reduce_tree(std::span<const WireId> wires, WireId empty, Combine combine) {
  if (wires.empty()) return empty;
  std::vector<WireId> level(wires.begin(), wires.end());
  while (level.size() > 1) {
    std::vector<WireId> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(combine(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

}  // namespace

WireId CircuitBuilder::and_all(std::span<const WireId> wires) {
  return reduce_tree(wires, one(), [this](WireId a, WireId b) { return and_(a, b); });
}

WireId CircuitBuilder::or_all(std::span<const WireId> wires) {
  return reduce_tree(wires, zero(), [this](WireId a, WireId b) { return or_(a, b); });
}

WireId CircuitBuilder::xor_all(std::span<const WireId> wires) {
  return reduce_tree(wires, zero(), [this](WireId a, WireId b) { return xor_(a, b); });
}

WireId CircuitBuilder::equal(std::span<const WireId> a, std::span<const WireId> b) {
  if (a.size() != b.size()) throw ValidationError("CircuitBuilder::equal: width mismatch");
  std::vector<WireId> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diffs.push_back(xor_(a[i], b[i]));
  return not_(or_all(diffs));
}

std::vector<WireId> CircuitBuilder::add_mod(std::span<const WireId> a, std::span<const WireId> b,
                                            WireId carry_in) {
  if (a.size() != b.size()) throw ValidationError("CircuitBuilder::add_mod: width mismatch");
  std::vector<WireId> sum;
  sum.reserve(a.size());
  WireId carry = carry_in;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const WireId t = xor_(a[i], b[i]);
    sum.push_back(xor_(t, carry));
    if (i + 1 < a.size()) carry = or_(and_(a[i], b[i]), and_(t, carry));
  }
  return sum;
}

std::vector<WireId> CircuitBuilder::add(std::span<const WireId> a, std::span<const WireId> b) {
  const std::size_t width = std::max(a.size(), b.size());
  std::vector<WireId> sum;
  WireId carry = zero();
  for (std::size_t i = 0; i < width; ++i) {
    const WireId x = i < a.size() ? a[i] : zero();
    const WireId y = i < b.size() ? b[i] : zero();
    const WireId t = xor_(x, y);
    sum.push_back(xor_(t, carry));
    carry = or_(and_(x, y), and_(t, carry));
  }
  sum.push_back(carry);
  return sum;
}

WireId CircuitBuilder::at_least(std::span<const WireId> a, std::uint64_t threshold) {
  if (threshold == 0) return one();
  if (a.size() < 64 && threshold >= (std::uint64_t{1} << a.size())) return zero();
  // Scan from the most significant bit: ge = a > t at the first differing
  // bit, or equality throughout.
  WireId greater = zero();
  WireId eq = one();
  for (std::size_t i = a.size(); i-- > 0;) {
    const bool tbit = i < 64 && ((threshold >> i) & 1U);
    if (tbit) {
      eq = and_(eq, a[i]);
    } else {
      greater = or_(greater, and_(eq, a[i]));
      eq = and_(eq, not_(a[i]));
    }
  }
  return or_(greater, eq);
}

std::vector<WireId> CircuitBuilder::popcount(std::span<const WireId> bits) {
  if (bits.empty()) return {zero()};
  std::deque<std::vector<WireId>> queue;
  for (WireId b : bits) queue.push_back({b});
  while (queue.size() > 1) {
    auto x = std::move(queue.front());
    queue.pop_front();
    auto y = std::move(queue.front());
    queue.pop_front();
    auto s = add(x, y);
    // Drop leading constant zeros.
    while (s.size() > 1 && constant_value(s.back()) == false) s.pop_back();
    queue.push_back(std::move(s));
  }
  return queue.front();
}

WireId CircuitBuilder::lookup(std::span<const WireId> select, std::span<const std::uint8_t> table) {
  if (select.size() >= 32 || table.size() != (std::size_t{1} << select.size())) {
    throw ValidationError("CircuitBuilder::lookup: table size must be 2^|select|");
  }
  // Leaves are constants; fold one selector bit per level, least
  // significant (last) selector first.
  std::vector<WireId> level;
  level.reserve(table.size());
  for (auto v : table) level.push_back(constant(v != 0));
  for (std::size_t s = select.size(); s-- > 0;) {
    std::vector<WireId> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) next.push_back(mux(select[s], level[i], level[i + 1]));
    level = std::move(next);
  }
  return level.front();
}

WireId CircuitBuilder::inline_circuit(const Circuit& sub, std::span<const WireId> inputs) {
  if (inputs.size() != sub.num_inputs()) {
    throw ValidationError("inline_circuit: expected " + std::to_string(sub.num_inputs()) +
                          " inputs, got " + std::to_string(inputs.size()));
  }
  std::vector<WireId> map(inputs.begin(), inputs.end());
  map.reserve(sub.num_wires());
  for (const Gate& g : sub.gates()) {
    WireId out = 0;
    switch (g.op) {
      case GateOp::And: out = and_(map[g.a], map[g.b]); break;
      case GateOp::Or: out = or_(map[g.a], map[g.b]); break;
      case GateOp::Xor: out = xor_(map[g.a], map[g.b]); break;
      case GateOp::Not: out = not_(map[g.a]); break;
      case GateOp::Const0: out = zero(); break;
      case GateOp::Const1: out = one(); break;
    }
    map.push_back(out);
  }
  return map[sub.output()];
}

// ---------------------------------------------------------------------------
// Exhaustive witness search

namespace {

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

// Calls visit(mask, base) for each batch of up to 64 consecutive w indices
// starting at base; bit i of mask is C(r, w = base + i). Stops when visit
// returns false.
template <class Visit>
void scan_witnesses(const Circuit& c, const BitString& r, const SearchLimits& limits,
                    Visit&& visit) {
  if (r.size() != c.r_len()) throw ValidationError("find_witness: |r| does not match circuit");
  const std::size_t n = c.w_len();
  if (n > limits.max_witness_bits) {
    throw LimitError("find_witness: N=" + std::to_string(n) + " exceeds exhaustive limit " +
                     std::to_string(limits.max_witness_bits));
  }
  std::vector<std::uint64_t> inputs(c.num_inputs());
  std::vector<std::uint64_t> scratch;
  for (std::size_t j = 0; j < c.r_len(); ++j) inputs[j] = r[j] ? ~std::uint64_t{0} : 0;
  const std::size_t lane_bits = std::min<std::size_t>(n, 6);
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t step = std::uint64_t{1} << lane_bits;
  const std::uint64_t valid = step == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << step) - 1;
  for (std::uint64_t base = 0; base < total; base += step) {
    // w bit j (MSB-first) is index bit n-1-j.
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ib = n - 1 - j;
      inputs[c.r_len() + j] =
          ib < lane_bits ? kLanePattern[ib] : (((base >> ib) & 1U) ? ~std::uint64_t{0} : 0);
    }
    const std::uint64_t mask = c.eval_lanes(inputs, scratch) & valid;
    if (!visit(mask, base)) return;
  }
}

}  // namespace

std::optional<BitString> find_witness(const Circuit& c, const BitString& r,
                                      const SearchLimits& limits) {
  std::optional<BitString> found;
  scan_witnesses(c, r, limits, [&](std::uint64_t mask, std::uint64_t base) {
    if (mask == 0) return true;
    found = BitString::from_index(base + static_cast<std::uint64_t>(__builtin_ctzll(mask)), c.w_len());
    return false;
  });
  return found;
}

std::vector<BitString> all_witnesses(const Circuit& c, const BitString& r,
                                     const SearchLimits& limits) {
  std::vector<BitString> out;
  scan_witnesses(c, r, limits, [&](std::uint64_t mask, std::uint64_t base) {
    while (mask != 0) {
      const int lane = __builtin_ctzll(mask);
      out.push_back(BitString::from_index(base + static_cast<std::uint64_t>(lane), c.w_len()));
      mask &= mask - 1;
    }
    return true;
  });
  return out;
}

bool SatProfile::is_satisfiable(const BitString& r) const {
  return std::binary_search(sat_r.begin(), sat_r.end(), r);
}

std::vector<int> SatProfile::distance_table() const {
  const std::size_t total = std::size_t{1} << r_len;
  std::vector<int> dist(total, -1);
  std::deque<std::size_t> frontier;
  for (const auto& s : sat_r) {
    const auto i = static_cast<std::size_t>(s.to_index());
    if (dist[i] < 0) {
      dist[i] = 0;
      frontier.push_back(i);
    }
  }
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop_front();
    for (std::size_t b = 0; b < r_len; ++b) {
      const std::size_t u = v ^ (std::size_t{1} << b);
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        frontier.push_back(u);
      }
    }
  }
  return dist;
}

SatProfile sat_profile(const Circuit& c, const SearchLimits& limits) {
  if (c.r_len() > limits.max_challenge_bits) {
    throw LimitError("sat_profile: l=" + std::to_string(c.r_len()) + " exceeds exhaustive limit " +
                     std::to_string(limits.max_challenge_bits));
  }
  if (c.w_len() > limits.max_witness_bits) {
    throw LimitError("sat_profile: N=" + std::to_string(c.w_len()) + " exceeds exhaustive limit " +
                     std::to_string(limits.max_witness_bits));
  }
  const std::uint64_t total = std::uint64_t{1} << c.r_len();
  const std::size_t shards = 16;
  std::vector<std::vector<std::pair<BitString, BitString>>> parts(shards);
  for_each_shard(shards, [&](std::size_t s) {
    const std::uint64_t lo = total * s / shards;
    const std::uint64_t hi = total * (s + 1) / shards;
    for (std::uint64_t i = lo; i < hi; ++i) {
      BitString r = BitString::from_index(i, c.r_len());
      if (auto w = find_witness(c, r, limits)) parts[s].emplace_back(std::move(r), std::move(*w));
    }
  });
  SatProfile profile;
  profile.circuit_name = c.name();
  profile.r_len = c.r_len();
  for (auto& part : parts) {
    for (auto& [r, w] : part) {
      profile.sat_r.push_back(std::move(r));
      profile.witnesses.push_back(std::move(w));
    }
  }
  return profile;
}

}  // namespace amcsp
