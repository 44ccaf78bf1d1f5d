#include "amcsp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "amcsp/error.hpp"
#include "amcsp/hamming.hpp"
#include "amcsp/parallel.hpp"
#include "amcsp/rng.hpp"

namespace amcsp {

AmProtocol make_protocol(std::string id, Circuit verifier, std::optional<bool> yes) {
  verifier.validate();
  AmProtocol p;
  p.id = std::move(id);
  if (verifier.name().empty()) verifier.set_name(p.id);
  p.verifier = std::move(verifier);
  p.yes = yes;
  p.base_r_len = p.verifier.r_len();
  return p;
}

SoundnessMeasurement measure_soundness(const AmProtocol& p, const SoundnessOptions& options) {
  SoundnessMeasurement m;
  const std::size_t l = p.r_len();
  if (options.mode == MeasureMode::Exhaustive) {
    const auto prof = sat_profile(p.verifier, options.limits);
    m.exhaustive = true;
    m.samples = std::size_t{1} << l;
    m.accepting = prof.sat_r.size();
  } else {
    if (options.trials == 0) throw ValidationError("measure_soundness: trials must be positive");
    if (p.w_len() > options.limits.max_witness_bits) {
      throw LimitError("measure_soundness: witness length exceeds limit");
    }
    constexpr std::size_t kShards = 16;
    std::vector<std::size_t> hits(kShards, 0);
    for_each_shard(kShards, [&](std::size_t s) {
      Rng rng(derive_seed(options.seed, s));
      const std::size_t lo = options.trials * s / kShards;
      const std::size_t hi = options.trials * (s + 1) / kShards;
      for (std::size_t t = lo; t < hi; ++t) {
        BitString r(l, false);
        for (std::size_t j = 0; j < l; ++j) r.set(j, rng.bit());
        if (find_witness(p.verifier, r, options.limits)) ++hits[s];
      }
    });
    m.exhaustive = false;
    m.samples = options.trials;
    for (const auto h : hits) m.accepting += h;
  }
  m.value = Rational(BigInt(m.accepting), BigInt(m.samples));
  if (!m.exhaustive) m.std_error = binomial_std_error(to_double(m.value), m.samples);
  return m;
}

bool check_completeness(const AmProtocol& p, const SearchLimits& limits) {
  const auto prof = sat_profile(p.verifier, limits);
  return prof.sat_r.size() == (std::size_t{1} << p.r_len());
}

AmProtocol pad_challenge(const AmProtocol& p, std::size_t extra) {
  if (extra == 0) return p;
  const Circuit& c = p.verifier;
  Circuit out(c.r_len() + extra, c.w_len(), c.name());
  CircuitBuilder b(out);
  std::vector<WireId> inputs;
  for (std::size_t j = 0; j < c.r_len(); ++j) inputs.push_back(out.r(j));
  for (std::size_t j = 0; j < c.w_len(); ++j) inputs.push_back(out.w(j));
  out.set_output(b.inline_circuit(c, inputs));
  AmProtocol q = p;
  q.verifier = std::move(out);
  q.id = p.id + "+pad" + std::to_string(extra);
  return q;
}

AmProtocol parallel_repeat(const AmProtocol& p, std::size_t t) {
  if (t == 0) throw ValidationError("parallel_repeat: t must be at least 1");
  if (t == 1) return p;
  const Circuit& c = p.verifier;
  const std::size_t l = c.r_len(), n = c.w_len();
  Circuit out(t * l, t * n, c.name() + "^" + std::to_string(t));
  CircuitBuilder b(out);
  std::vector<WireId> accepts;
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<WireId> inputs;
    for (std::size_t j = 0; j < l; ++j) inputs.push_back(out.r(i * l + j));
    for (std::size_t j = 0; j < n; ++j) inputs.push_back(out.w(i * n + j));
    accepts.push_back(b.inline_circuit(c, inputs));
  }
  out.set_output(b.and_all(accepts));
  AmProtocol q = p;
  q.verifier = std::move(out);
  q.id = p.id + "/par" + std::to_string(t);
  q.amplifier = "parallel";
  q.repetitions = t;
  return q;
}

AmProtocol expander_repeat(const AmProtocol& p, const ExpanderGraph& g, std::size_t t) {
  if (t == 0) throw ValidationError("expander_repeat: t must be at least 1");
  if (t == 1) return p;
  const Circuit& c = p.verifier;
  const std::size_t l = c.r_len(), n = c.w_len();
  if (g.family() != "margulis" || l % 2 != 0 || g.side() != (std::size_t{1} << (l / 2))) {
    throw ValidationError("expander_repeat: challenges of length " + std::to_string(l) +
                          " do not embed in the vertex set of " + g.family() + " graph on " +
                          std::to_string(g.vertices()) + " vertices");
  }
  Circuit out(l + 3 * (t - 1), t * n, c.name() + "^walk" + std::to_string(t));
  CircuitBuilder b(out);
  std::vector<WireId> vertex;
  for (std::size_t j = 0; j < l; ++j) vertex.push_back(out.r(j));
  std::vector<WireId> accepts;
  for (std::size_t i = 0; i < t; ++i) {
    if (i > 0) {
      const std::size_t at = l + 3 * (i - 1);
      const std::vector<WireId> port{out.r(at), out.r(at + 1), out.r(at + 2)};
      vertex = margulis_step(b, vertex, port);
    }
    std::vector<WireId> inputs = vertex;
    for (std::size_t j = 0; j < n; ++j) inputs.push_back(out.w(i * n + j));
    accepts.push_back(b.inline_circuit(c, inputs));
  }
  out.set_output(b.and_all(accepts));
  AmProtocol q = p;
  q.verifier = std::move(out);
  q.id = p.id + "/walk" + std::to_string(t);
  q.amplifier = "expander";
  q.repetitions = t;
  q.experimental = true;
  return q;
}

AmProtocol secret_protocol(std::string id, const BitString& secret, std::size_t checked,
                           std::size_t witness_bits) {
  const std::size_t l = secret.size();
  if (checked > l || witness_bits > l || l == 0) {
    throw ValidationError("secret_protocol: need checked <= l and N <= l");
  }
  Circuit c(l, witness_bits, id);
  CircuitBuilder b(c);
  std::vector<WireId> conds;
  for (std::size_t j = 0; j < checked; ++j) conds.push_back(secret[j] ? c.r(j) : b.not_(c.r(j)));
  for (std::size_t j = 0; j < witness_bits; ++j) conds.push_back(b.xnor(c.w(j), c.r(j)));
  c.set_output(b.and_all(conds));
  return make_protocol(std::move(id), std::move(c), checked == 0);
}

AmProtocol set_size_protocol(std::string id, std::size_t l, std::size_t n,
                             const std::vector<std::uint8_t>& members) {
  if (l == 0 || l > n || members.size() != (std::size_t{1} << n)) {
    throw ValidationError("set_size_protocol: need 1 <= l <= n and a 2^n bitmap");
  }
  Circuit c(l, n, id);
  CircuitBuilder b(c);
  std::vector<WireId> conds;
  for (std::size_t j = 0; j < l; ++j) conds.push_back(b.xnor(c.w(j), c.r(j)));
  std::vector<WireId> w;
  for (std::size_t j = 0; j < n; ++j) w.push_back(c.w(j));
  conds.push_back(b.lookup(w, members));
  c.set_output(b.and_all(conds));
  // Label by the prefixes covered: all -> YES, at most a third -> NO.
  std::vector<std::uint8_t> covered(std::size_t{1} << l, 0);
  for (std::size_t x = 0; x < members.size(); ++x) {
    if (members[x]) covered[x >> (n - l)] = 1;
  }
  const auto hit = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 1));
  std::optional<bool> yes;
  if (hit == covered.size()) yes = true;
  else if (3 * hit <= covered.size()) yes = false;
  return make_protocol(std::move(id), std::move(c), yes);
}

AmProtocol planted_protocol(std::string id, std::size_t l, std::size_t witness_bits,
                            std::size_t satisfiable, std::uint64_t seed) {
  const std::size_t space = std::size_t{1} << l;
  if (l == 0 || l > 16 || witness_bits == 0 || satisfiable > space) {
    throw ValidationError("planted_protocol: bad parameters");
  }
  Rng rng(seed);
  std::vector<std::size_t> order(space);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < satisfiable; ++i) std::swap(order[i], order[i + rng.below(space - i)]);
  std::vector<std::uint8_t> in_t(space, 0);
  for (std::size_t i = 0; i < satisfiable; ++i) in_t[order[i]] = 1;
  std::vector<std::vector<std::uint8_t>> planted(witness_bits, std::vector<std::uint8_t>(space, 0));
  for (std::size_t r = 0; r < space; ++r) {
    for (std::size_t j = 0; j < witness_bits; ++j) planted[j][r] = rng.bit();
  }
  Circuit c(l, witness_bits, id);
  CircuitBuilder b(c);
  std::vector<WireId> r;
  for (std::size_t j = 0; j < l; ++j) r.push_back(c.r(j));
  std::vector<WireId> conds{b.lookup(r, in_t)};
  for (std::size_t j = 0; j < witness_bits; ++j) conds.push_back(b.xnor(c.w(j), b.lookup(r, planted[j])));
  c.set_output(b.and_all(conds));
  std::optional<bool> yes;
  if (satisfiable == space) yes = true;
  else if (3 * satisfiable <= space) yes = false;
  return make_protocol(std::move(id), std::move(c), yes);
}

AmProtocol trivial_protocol(std::string id, std::size_t l, std::size_t witness_bits) {
  Circuit c(l, witness_bits, id);
  CircuitBuilder b(c);
  c.set_output(b.one());
  return make_protocol(std::move(id), std::move(c), true);
}

std::vector<AmProtocol> toy_corpus(std::uint64_t seed) {
  std::vector<AmProtocol> out;
  out.push_back(trivial_protocol("trivial", 2, 1));
  out.push_back(secret_protocol("secret-yes", BitString::parse("101"), 0, 2));
  out.push_back(secret_protocol("secret-no", BitString::parse("10"), 2, 2));
  out.push_back(secret_protocol("secret-no3", BitString::parse("011"), 2, 2));

  // S covers every 2-bit prefix, or only one of four.
  std::vector<std::uint8_t> big(16, 0), small(16, 0);
  for (const std::size_t x : {1u, 6u, 7u, 9u, 14u}) big[x] = 1;
  for (const std::size_t x : {5u, 6u}) small[x] = 1;
  out.push_back(set_size_protocol("setsize-yes", 2, 4, big));
  out.push_back(set_size_protocol("setsize-no", 2, 4, small));

  out.push_back(planted_protocol("planted-yes", 3, 2, 8, derive_seed(seed, 1)));
  out.push_back(planted_protocol("planted-no", 3, 2, 2, derive_seed(seed, 2)));
  out.push_back(planted_protocol("planted-no4", 4, 2, 4, derive_seed(seed, 3)));
  return out;
}

PipelineResult theorem1_pipeline(const AmProtocol& p, const PipelineOptions& options) {
  PipelineResult res;
  if (options.amplifier == "parallel") {
    res.amplified = parallel_repeat(p, options.t);
  } else if (options.amplifier == "expander") {
    AmProtocol base = p.r_len() % 2 == 0 ? p : pad_challenge(p, 1);
    const auto g = build_margulis(std::size_t{1} << (base.r_len() / 2));
    res.amplified = expander_repeat(base, g, options.t);
    res.amplified.experimental = true;
  } else {
    throw ValidationError("unknown amplifier '" + options.amplifier + "'");
  }
  res.amplified.base_r_len = p.r_len();
  res.reduction = build_stochastic_csp(res.amplified.verifier, options.reduction);
  auto& psi = res.reduction.psi;
  psi.set_meta("protocol", p.id);
  psi.set_meta("amplifier", options.amplifier + (options.amplifier == "expander" ? " (EXPERIMENTAL)" : ""));
  psi.set_meta("t", std::to_string(options.t));
  return res;
}

std::optional<Rational> choose_alpha(double D) {
  if (!(D > 0)) return std::nullopt;
  const double target = 1.0 / D;
  for (const std::int64_t den : {64, 1024}) {
    for (std::int64_t i = den / 2; i >= 1; --i) {
      const Rational a = make_rational(i, den);
      if (entropy(a) < target) return a;
    }
  }
  return std::nullopt;
}

PipelineAnalysis analyze_pipeline(const PipelineResult& result, std::size_t max_exhaustive_bits) {
  const auto& out = result.reduction;
  const std::size_t l2 = out.r_len();
  if (l2 > max_exhaustive_bits) throw LimitError("analyze_pipeline: challenge length over the exhaustive limit");
  PipelineAnalysis a;
  a.l2 = l2;

  SearchLimits limits;
  limits.max_challenge_bits = max_exhaustive_bits;
  const auto sat = sat_profile(out.source, limits);
  a.satisfiable = sat.sat_r.size();
  const auto distance = sat.distance_table();

  // soundness = sat / 2^l2 <= 2^-l1 iff sat <= 2^(l2 - l1).
  std::size_t ceil_log = 0;
  while ((std::size_t{1} << ceil_log) < a.satisfiable) ++ceil_log;
  a.l1 = a.satisfiable == 0 ? l2 : l2 - ceil_log;
  a.bound_applies = a.l1 >= 1;
  a.D = a.l1 == 0 ? INFINITY : static_cast<double>(l2) / static_cast<double>(a.l1);
  a.D_effective = a.satisfiable == 0
                      ? 1.0
                      : static_cast<double>(l2) /
                            (static_cast<double>(l2) - std::log2(static_cast<double>(a.satisfiable)));

  ProfileOptions popts;
  popts.max_exhaustive_bits = max_exhaustive_bits;
  popts.max.want_argmax = false;
  a.profile = gap_profile(out.psi, popts);
  a.fraction_full = a.profile.fraction_full();

  const auto c = soundness_constant(out, a.profile, distance);
  if (c) {
    a.c_meas = *c;
    a.c_measured = true;
  } else {
    const std::size_t m = out.psi.num_constraints();
    a.c_meas = Rational(BigInt(out.params.blocks * l2), BigInt(m));
  }

  if (a.bound_applies) {
    const auto alpha = choose_alpha(a.D);
    if (!alpha) throw ValidationError("analyze_pipeline: no alpha with H(alpha) < 1/D");
    a.alpha = *alpha;
    a.radius = static_cast<std::size_t>(floor_of(a.alpha * l2));
    a.eps_meas = a.c_meas * Rational(BigInt(a.radius + 1), BigInt(l2));
    if (a.eps_meas > 1) a.eps_meas = 1;
    // V * 2^{(1 - 1/D) l2} / 2^l2 = V * 2^{-l1}.
    a.bound = Rational(sphere_volume(l2, a.radius), BigInt(1) << a.l1);
    a.fraction_above = a.profile.fraction_above(a.eps_meas);
    a.verdict = classify_promise(a.profile, a.eps_meas, a.bound);
  } else {
    a.eps_meas = a.c_meas / l2;
    a.fraction_above = a.profile.fraction_above(a.eps_meas);
    a.bound = 1;
    a.verdict = a.fraction_full == 1 ? Verdict::Yes : Verdict::Neither;
  }
  return a;
}

}  // namespace amcsp
