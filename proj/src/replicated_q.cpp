#include "amcsp/replicated_q.hpp"

#include <vector>

#include "amcsp/error.hpp"

namespace amcsp {

Circuit pad_witness(const Circuit& c, std::size_t target) {
  if (target < c.w_len()) throw ValidationError("pad_witness: target shorter than witness");
  if (target == c.w_len()) return c;
  Circuit out(c.r_len(), target, c.name());
  CircuitBuilder b(out);
  std::vector<WireId> inputs;
  for (std::size_t j = 0; j < c.r_len(); ++j) inputs.push_back(out.r(j));
  for (std::size_t j = 0; j < c.w_len(); ++j) inputs.push_back(out.w(j));
  const WireId body = b.inline_circuit(c, inputs);
  std::vector<WireId> pad;
  for (std::size_t j = c.w_len(); j < target; ++j) pad.push_back(out.w(j));
  out.set_output(b.and_(body, b.not_(b.or_all(pad))));
  return out;
}

std::size_t replication_count(std::size_t r_len, std::size_t code_bits) {
  if (r_len == 0) throw ValidationError("replication_count: l must be positive");
  return (code_bits + r_len - 1) / r_len;
}

ReplicatedQ build_replicated_q(const Circuit& c, const CodeSpec& code) {
  if (code.message_bits != c.w_len()) {
    throw ValidationError("build_replicated_Q: code message length " +
                          std::to_string(code.message_bits) + " differs from N=" +
                          std::to_string(c.w_len()));
  }
  if (!code.systematic || !code.linear) {
    throw ValidationError("build_replicated_Q: code must be systematic and linear");
  }
  c.validate();
  const std::size_t l = c.r_len();
  const std::size_t b = replication_count(l, code.codeword_bits);

  ReplicatedQ q;
  q.blocks = b;
  q.r_len = l;
  q.code_bits = code.codeword_bits;
  q.circuit = Circuit(b * l + code.codeword_bits, 0, c.name().empty() ? "Q" : "Q[" + c.name() + "]");
  Circuit& out = q.circuit;
  CircuitBuilder builder(out);

  auto block = [&](std::size_t i, std::size_t j) { return out.r(i * l + j); };
  auto u = [&](std::size_t j) { return out.r(b * l + j); };

  std::vector<WireId> mismatches;
  for (std::size_t i = 1; i < b; ++i) {
    for (std::size_t j = 0; j < l; ++j) mismatches.push_back(builder.xor_(block(0, j), block(i, j)));
  }
  const WireId blocks_equal = builder.not_(builder.or_all(mismatches));

  const auto sys = systematic_positions(code);
  std::vector<bool> is_sys(code.codeword_bits, false);
  for (auto p : sys) is_sys[p] = true;
  const auto gen = linear_generator(code);
  std::size_t generator_weight = 0;
  std::vector<WireId> parity_failures;
  for (std::size_t j = 0; j < code.codeword_bits; ++j) {
    if (is_sys[j]) continue;
    std::vector<WireId> terms{u(j)};
    for (auto i : gen[j]) terms.push_back(u(sys[i]));
    generator_weight += gen[j].size();
    parity_failures.push_back(builder.xor_all(terms));
  }
  const WireId in_code = builder.not_(builder.or_all(parity_failures));

  std::vector<WireId> c_inputs;
  for (std::size_t j = 0; j < l; ++j) c_inputs.push_back(block(0, j));
  for (auto p : sys) c_inputs.push_back(u(p));
  const WireId accepts = builder.inline_circuit(c, c_inputs);

  const WireId parts[] = {blocks_equal, in_code, accepts};
  out.set_output(builder.and_all(parts));
  q.size_budget = c.size() + 2 * b * l + generator_weight + code.codeword_bits + 8;
  if (out.size() > q.size_budget) {
    throw std::logic_error("build_replicated_Q: size budget exceeded");
  }
  return q;
}

}  // namespace amcsp
