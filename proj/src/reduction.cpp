#include "amcsp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "amcsp/error.hpp"
#include "amcsp/hamming.hpp"
#include "amcsp/parallel.hpp"
#include "amcsp/rng.hpp"

namespace amcsp {

ReductionParams choose_parameters(const Rational& eps, const Rational& eta, const Rational& beta) {
  auto in_unit = [](const Rational& q) { return q > 0 && q <= 1; };
  if (!in_unit(eps) || !in_unit(eta) || !in_unit(beta)) {
    throw ValidationError("choose_parameters: epsilon, eta and beta must lie in (0, 1]");
  }
  ReductionParams p;
  p.epsilon = eps;
  p.eta = eta;
  p.beta = beta;
  const double target = to_double(eps);
  for (const std::int64_t den : {64, 1024}) {
    for (std::int64_t i = den / 2; i >= 1; --i) {
      const Rational g = make_rational(i, den);
      if (entropy(g) <= target) {
        p.gamma = g;
        break;
      }
    }
    if (p.gamma > 0) break;
  }
  if (p.gamma == 0) {
    throw ValidationError("choose_parameters: no gamma on the 1/1024 grid has H(gamma) <= " +
                          to_string(eps));
  }
  p.nu = eta * beta * p.gamma / 4;
  return p;
}

std::vector<BitString> replicated_accepting(const Circuit& padded, const CodeSpec& code,
                                            std::size_t blocks, const SearchLimits& limits,
                                            std::size_t max_accepting) {
  if (padded.r_len() > limits.max_challenge_bits) {
    throw LimitError("challenge length " + std::to_string(padded.r_len()) + " exceeds limit " +
                     std::to_string(limits.max_challenge_bits));
  }
  std::vector<BitString> out;
  const std::uint64_t total = std::uint64_t{1} << padded.r_len();
  for (std::uint64_t i = 0; i < total; ++i) {
    const BitString r = BitString::from_index(i, padded.r_len());
    const auto witnesses = all_witnesses(padded, r, limits);
    if (out.size() + witnesses.size() > max_accepting) {
      throw LimitError("Q^{-1}(1) exceeds " + std::to_string(max_accepting) + " elements");
    }
    if (witnesses.empty()) continue;
    BitString rep;
    for (std::size_t k = 0; k < blocks; ++k) rep.append(r);
    for (const auto& w : witnesses) out.push_back(BitString::concat(rep, encode(code, w)));
  }
  return out;
}

namespace {

// Rewrites the PCPP's 2-CSP over Q's inputs into psi(r, u, Z): block copies
// of r collapse onto r, u-inputs become Merlin vars over the extended
// alphabet, and any constraint reading a non-Boolean u symbol rejects.
Csp substitute(const Csp& pcpp, std::size_t l, std::size_t blocks, std::size_t code_bits,
               Symbol u_alphabet) {
  std::vector<Symbol> merlin(code_bits, u_alphabet);
  for (const Symbol a : pcpp.merlin_alphabets()) merlin.push_back(a);
  Csp psi(l, merlin, pcpp.arity());
  const std::size_t rep = blocks * l;

  auto map_var = [&](VarId v) -> VarId {
    if (pcpp.is_arthur(v)) {
      if (v < rep) return static_cast<VarId>(v % l);
      return psi.merlin_var(v - rep);
    }
    return psi.merlin_var(code_bits + (v - pcpp.arthur_count()));
  };

  for (const auto& con : pcpp.constraints()) {
    std::vector<VarId> scope;
    std::vector<std::size_t> slot(con.scope.size());
    for (std::size_t i = 0; i < con.scope.size(); ++i) {
      const VarId nv = map_var(con.scope[i]);
      auto it = std::find(scope.begin(), scope.end(), nv);
      slot[i] = static_cast<std::size_t>(it - scope.begin());
      if (it == scope.end()) scope.push_back(nv);
    }
    std::size_t rows = 1;
    for (const VarId v : scope) rows *= psi.alphabet(v);
    std::vector<std::uint8_t> table(rows, 0);
    std::vector<Symbol> value(scope.size(), 0);
    for (std::size_t row = 0; row < rows; ++row) {
      std::size_t rest = row;
      for (std::size_t i = scope.size(); i-- > 0;) {
        value[i] = static_cast<Symbol>(rest % psi.alphabet(scope[i]));
        rest /= psi.alphabet(scope[i]);
      }
      bool boolean = true;
      std::size_t old = 0;
      for (std::size_t i = 0; i < con.scope.size(); ++i) {
        const Symbol s = value[slot[i]];
        const Symbol a = pcpp.alphabet(con.scope[i]);
        if (s >= a) {
          boolean = false;
          break;
        }
        old = old * a + s;
      }
      table[row] = boolean ? con.table[old] : 0;
    }
    psi.add_constraint(std::move(scope), std::move(table));
  }
  if (pcpp.hub()) psi.set_hub(code_bits + *pcpp.hub());
  return psi;
}

BitString pad_to(const BitString& w, std::size_t n) {
  BitString out = w;
  while (out.size() < n) out.push_back(false);
  return out;
}

bool accepts(const ReductionOutput& out, const BitString& r, const BitString& w) {
  return out.source.eval(r, pad_to(w, out.source.w_len()));
}

}  // namespace

ReductionOutput build_stochastic_csp(const Circuit& c, const ReductionOptions& options) {
  c.validate();
  if (c.r_len() == 0) throw ValidationError("build_stochastic_csp: l must be positive");
  if (c.w_len() == 0) throw ValidationError("build_stochastic_csp: N must be positive");
  if (options.u_alphabet < 2) throw ValidationError("u alphabet must contain {0, 1}");

  ReductionOutput out;
  out.witness_bits = c.w_len();
  out.source = pad_witness(c, std::max(c.w_len(), c.r_len()));
  out.code = build_code(options.code, out.source.w_len());
  out.q = build_replicated_q(out.source, out.code);

  const auto accepting = replicated_accepting(out.source, out.code, out.q.blocks, options.limits,
                                              options.max_accepting);
  PcppBuildOptions pcpp_options;
  pcpp_options.accepting = &accepting;
  out.pcpp = build_pcpp(out.q.circuit, options.backend, pcpp_options);

  out.params = choose_parameters(options.epsilon, out.code.eta, out.pcpp.claimed_beta);
  out.params.blocks = out.q.blocks;
  out.params.u_alphabet = options.u_alphabet;

  out.psi = substitute(out.pcpp.csp, c.r_len(), out.q.blocks, out.code.codeword_bits,
                       options.u_alphabet);
  out.fast_path = star_structure_valid(out.psi);

  auto& meta = out.psi;
  meta.set_meta("source", c.name());
  meta.set_meta("l", std::to_string(c.r_len()));
  meta.set_meta("N", std::to_string(out.witness_bits));
  meta.set_meta("N_padded", std::to_string(out.source.w_len()));
  meta.set_meta("N_prime", std::to_string(out.code.codeword_bits));
  meta.set_meta("code", out.code.id());
  meta.set_meta("backend", out.pcpp.backend);
  meta.set_meta("constant_alphabet", out.pcpp.constant_alphabet ? "true" : "false");
  meta.set_meta("epsilon", to_string(out.params.epsilon));
  meta.set_meta("gamma", to_string(out.params.gamma));
  meta.set_meta("nu", to_string(out.params.nu));
  meta.set_meta("beta", to_string(out.params.beta));
  meta.set_meta("claimed_beta", to_string(out.params.beta));
  meta.set_meta("eta", to_string(out.params.eta));
  meta.set_meta("b", std::to_string(out.params.blocks));
  meta.set_meta("u_alphabet", std::to_string(out.params.u_alphabet));
  meta.set_meta("Q_size", std::to_string(out.q.circuit.size()));
  return out;
}

std::vector<Symbol> honest_proof(const ReductionOutput& out, const BitString& r,
                                 const BitString& w) {
  if (r.size() != out.r_len() || w.size() != out.witness_bits) {
    throw ValidationError("honest_proof: expected |r|=" + std::to_string(out.r_len()) +
                          " and |w|=" + std::to_string(out.witness_bits));
  }
  if (!accepts(out, r, w)) {
    throw ValidationError("honest_proof: C(r, w) = 0 for r=" + r.to_string() + " w=" + w.to_string());
  }
  const BitString u = encode(out.code, pad_to(w, out.source.w_len()));
  BitString x;
  for (std::size_t k = 0; k < out.q.blocks; ++k) x.append(r);
  x.append(u);
  const auto proof = out.pcpp.honest_proof(x);
  if (!proof) throw std::logic_error("honest_proof: backend has no proof for an accepting input");
  std::vector<Symbol> z;
  z.reserve(u.size() + proof->size());
  for (std::size_t j = 0; j < u.size(); ++j) z.push_back(u[j] ? 1 : 0);
  z.insert(z.end(), proof->begin(), proof->end());
  return z;
}

BitString decoding_prover(const ReductionOutput& out, const BitString& r,
                          const std::vector<Symbol>& z) {
  if (r.size() != out.r_len() || z.size() != out.psi.merlin_count()) {
    throw ValidationError("decoding_prover: assignment shape does not match psi");
  }
  BitString u(out.u_count(), false);
  for (std::size_t j = 0; j < out.u_count(); ++j) u.set(j, z[j] == 1);
  const auto decoded = decode(out.code, u);
  BitString w(out.witness_bits, false);
  if (decoded) {
    for (std::size_t j = 0; j < out.witness_bits; ++j) w.set(j, (*decoded)[j]);
  }
  return w;
}

BitString smoothed_prover(const ReductionOutput& out, const Prover& p, const BitString& r,
                          BallSampler& ball) {
  const BitString y = r ^ ball.sample();
  return decoding_prover(out, y, p(y));
}

SmoothedReport measure_smoothed_prover(const ReductionOutput& out, const Prover& p,
                                       std::size_t trials, std::uint64_t seed) {
  const std::size_t l = out.r_len();
  if (l > 20) throw LimitError("measure_smoothed_prover: l > 20");
  SmoothedReport rep;
  rep.radius = static_cast<std::size_t>(floor_of(out.params.gamma * l));
  rep.trials = trials;
  rep.ball_volume = sphere_volume(l, rep.radius).convert_to<std::uint64_t>();

  // P~ only ever consults P'(y, P(y)) at y = r + v.
  const std::size_t space = std::size_t{1} << l;
  std::vector<BitString> decoded(space);
  std::size_t base = 0;
  for (std::size_t y = 0; y < space; ++y) {
    const BitString ry = BitString::from_index(y, l);
    decoded[y] = decoding_prover(out, ry, p(ry));
    if (accepts(out, ry, decoded[y])) ++base;
  }
  rep.base_success = Rational(BigInt(base), BigInt(space));
  rep.bound = to_double(rep.base_success) * std::exp2(-entropy(out.params.gamma) * static_cast<double>(l));

  constexpr std::size_t kShards = 16;
  std::vector<std::size_t> hits(kShards, 0);
  for_each_shard(kShards, [&](std::size_t s) {
    const std::size_t lo = trials * s / kShards;
    const std::size_t hi = trials * (s + 1) / kShards;
    Rng rng(derive_seed(seed, 2 * s));
    BallSampler ball(l, rep.radius, derive_seed(seed, 2 * s + 1));
    for (std::size_t t = lo; t < hi; ++t) {
      const BitString r = BitString::from_index(rng.below(space), l);
      const BitString y = r ^ ball.sample();
      if (accepts(out, r, decoded[y.to_index()])) ++hits[s];
    }
  });
  for (const auto h : hits) rep.successes += h;
  if (trials > 0) {
    rep.rate = static_cast<double>(rep.successes) / static_cast<double>(trials);
    rep.std_error = std::sqrt(rep.rate * (1 - rep.rate) / static_cast<double>(trials));
  }

  if (static_cast<double>(space) * static_cast<double>(rep.ball_volume) <= 16777216.0) {
    std::size_t best = 0;
    bool first = true;
    for (std::size_t v = 0; v < space; ++v) {
      const BitString vb = BitString::from_index(v, l);
      if (vb.weight() > rep.radius) continue;
      std::size_t count = 0;
      for (std::size_t r = 0; r < space; ++r) {
        if (accepts(out, BitString::from_index(r, l), decoded[r ^ v])) ++count;
      }
      if (first || count > best) {
        best = count;
        rep.best_fixed_v = vb;
        first = false;
      }
    }
    rep.best_fixed_rate = Rational(BigInt(best), BigInt(space));
  }
  return rep;
}

std::optional<Rational> soundness_constant(const ReductionOutput& out, const GapProfile& profile,
                                           const std::vector<int>& distance) {
  if (!profile.exhaustive || profile.records.size() != distance.size()) {
    throw ValidationError("soundness_constant: needs an exhaustive profile matching the distance table");
  }
  const std::size_t m = profile.constraints;
  std::optional<Rational> best;
  for (std::size_t i = 0; i < distance.size(); ++i) {
    if (distance[i] <= 0) continue;
    const std::size_t deficit = m - profile.records[i].max_satisfied;
    const Rational c(BigInt(out.r_len() * deficit), BigInt(m * static_cast<std::size_t>(distance[i])));
    if (!best || c < *best) best = c;
  }
  return best;
}

ChainReport check_decoding_chain(const ReductionOutput& out, std::size_t max_assignments) {
  const Csp& psi = out.psi;
  if (!out.fast_path) throw ValidationError("check_decoding_chain: psi lacks a valid star structure");
  const std::size_t l = out.r_len();
  if (l > 20) throw LimitError("check_decoding_chain: l > 20");
  const VarId hub = psi.merlin_var(*psi.hub());
  const std::size_t merlin = psi.merlin_count();
  const std::size_t m = psi.num_constraints();

  // Violations allowed: strictly fewer than nu * m.
  const Rational limit = out.params.nu * m;
  const BigInt ceil_limit = ceil_of(limit);
  const std::size_t budget_plus_one = ceil_limit.convert_to<std::size_t>();
  if (budget_plus_one == 0) return {};
  const std::size_t budget = budget_plus_one - 1;

  // Constraints grouped by the leaf they touch (leaf = non-hub Merlin var).
  std::vector<std::vector<std::size_t>> by_leaf(merlin);
  std::vector<std::size_t> core;
  for (std::size_t k = 0; k < m; ++k) {
    std::optional<std::size_t> leaf;
    for (const VarId v : psi.constraints()[k].scope) {
      if (!psi.is_arthur(v) && v != hub) leaf = v - psi.arthur_count();
    }
    if (leaf) by_leaf[*leaf].push_back(k);
    else core.push_back(k);
  }

  ChainReport report;
  const Symbol hub_alpha = psi.alphabet(hub);
  std::vector<Symbol> z(merlin, 0);
  const std::size_t space = std::size_t{1} << l;

  for (std::size_t ri = 0; ri < space; ++ri) {
    const BitString r = BitString::from_index(ri, l);
    for (Symbol s = 0; s < hub_alpha; ++s) {
      z[*psi.hub()] = s;
      std::size_t base = 0;
      for (const auto k : core) {
        const auto& con = psi.constraints()[k];
        if (!con.table[table_index(psi, con, r, z)]) ++base;
      }
      if (base > budget) continue;

      // Per leaf: (cost, symbol) options sorted by cost.
      std::vector<std::vector<std::pair<std::size_t, Symbol>>> options(merlin);
      std::vector<std::size_t> min_cost(merlin + 1, 0);
      for (std::size_t j = 0; j < merlin; ++j) {
        if (j == *psi.hub()) continue;
        const VarId v = psi.merlin_var(j);
        for (Symbol a = 0; a < psi.alphabet(v); ++a) {
          z[j] = a;
          std::size_t cost = 0;
          for (const auto k : by_leaf[j]) {
            const auto& con = psi.constraints()[k];
            if (!con.table[table_index(psi, con, r, z)]) ++cost;
          }
          options[j].emplace_back(cost, a);
        }
        std::sort(options[j].begin(), options[j].end());
      }
      for (std::size_t j = merlin; j-- > 0;) {
        min_cost[j] = min_cost[j + 1] + (options[j].empty() ? 0 : options[j].front().first);
      }
      if (base + min_cost[0] > budget) continue;

      auto visit = [&](auto&& self, std::size_t j, std::size_t spent) -> void {
        if (j == merlin) {
          if (++report.assignments > max_assignments) {
            throw LimitError("check_decoding_chain: more than " + std::to_string(max_assignments) +
                             " high-value assignments");
          }
          const BitString w = decoding_prover(out, r, z);
          bool ok = false;
          for (std::size_t r2 = 0; r2 < space && !ok; ++r2) {
            const BitString rr = BitString::from_index(r2, l);
            if (Rational(hamming_distance(r, rr)) < out.params.gamma * l && accepts(out, rr, w)) ok = true;
          }
          if (!ok) {
            ++report.failures;
            if (!report.first_failure) {
              report.first_failure = "r=" + r.to_string() + " decodes to w=" + w.to_string() +
                                     " with no valid r' within gamma*l";
            }
          }
          return;
        }
        if (options[j].empty()) {
          self(self, j + 1, spent);
          return;
        }
        for (const auto& [cost, a] : options[j]) {
          if (spent + cost + min_cost[j + 1] > budget) break;
          z[j] = a;
          self(self, j + 1, spent + cost);
        }
      };
      visit(visit, 0, base);
    }
  }
  return report;
}

}  // namespace amcsp
