#include <gtest/gtest.h>

#include "amcsp/error.hpp"
#include "amcsp/reduction.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace amcsp;

namespace {

// w = complement of r.
Circuit complement(std::size_t l) {
  Circuit c(l, l, "complement");
  CircuitBuilder b(c);
  std::vector<WireId> terms;
  for (std::size_t j = 0; j < l; ++j) terms.push_back(b.xor_(c.r(j), c.w(j)));
  c.set_output(b.and_all(terms));
  return c;
}

// Accepts (r, w) with r in `members` and w = r.
Circuit members_only(std::size_t l, const std::vector<std::uint64_t>& members) {
  Circuit c(l, l, "members");
  CircuitBuilder b(c);
  std::vector<WireId> r, w, hits;
  for (std::size_t j = 0; j < l; ++j) {
    r.push_back(c.r(j));
    w.push_back(c.w(j));
  }
  for (const auto m : members) {
    std::vector<WireId> lits;
    for (std::size_t j = 0; j < l; ++j) lits.push_back(((m >> (l - 1 - j)) & 1) ? r[j] : b.not_(r[j]));
    hits.push_back(b.and_all(lits));
  }
  c.set_output(b.and_(b.or_all(hits), b.equal(r, w)));
  return c;
}

Rational rat(std::size_t a, std::size_t b) { return Rational(BigInt(a), BigInt(b)); }

}  // namespace

TEST(ChooseParameters, Examples) {
  const auto p = choose_parameters(1, 1, 1);
  EXPECT_EQ(p.gamma, make_rational(1, 2));
  EXPECT_EQ(p.nu, make_rational(1, 8));
  const auto q = choose_parameters(make_rational(1, 2), 1, 1);
  EXPECT_EQ(q.gamma, make_rational(7, 64));
  EXPECT_LE(entropy(q.gamma), 0.5);
  EXPECT_GT(entropy(make_rational(8, 64)), 0.5);
}

TEST(ChooseParameters, NuIsLinear) {
  const Rational eps = make_rational(1, 2);
  const auto base = choose_parameters(eps, make_rational(1, 4), make_rational(1, 2));
  EXPECT_EQ(base.nu, base.eta * base.beta * base.gamma / 4);
  EXPECT_EQ(choose_parameters(eps, make_rational(1, 2), make_rational(1, 2)).nu, 2 * base.nu);
  EXPECT_EQ(choose_parameters(eps, make_rational(1, 4), 1).nu, 2 * base.nu);
}

TEST(ChooseParameters, GridScanAndRefinement) {
  for (int i = 2; i <= 100; ++i) {
    const Rational eps = make_rational(i, 100);
    const auto p = choose_parameters(eps, 1, 1);
    ASSERT_LE(entropy(p.gamma), to_double(eps) + 1e-15);
    ASSERT_GT(p.gamma, 0);
  }
  // H(1/64) is about 0.116, so eps = 0.05 needs the finer grid.
  const auto fine = choose_parameters(make_rational(1, 20), 1, 1);
  EXPECT_EQ(fine.gamma.convert_to<double>() * 1024, std::floor(fine.gamma.convert_to<double>() * 1024));
  EXPECT_LT(fine.gamma, make_rational(1, 64));
  // H(1/1024) is about 0.0112.
  EXPECT_THROW(choose_parameters(make_rational(1, 100), 1, 1), ValidationError);
  EXPECT_THROW(choose_parameters(0, 1, 1), ValidationError);
}

TEST(Reduction, Shape) {
  const auto out = build_stochastic_csp(complement(3));
  EXPECT_EQ(out.r_len(), 3u);
  EXPECT_EQ(out.psi.arity(), 2u);
  EXPECT_EQ(out.psi.arthur_count(), 3u);
  EXPECT_EQ(out.u_count(), 64u);
  EXPECT_EQ(out.params.blocks, (64u + 2) / 3);
  EXPECT_EQ(out.psi.merlin_count(), 64u + out.proof_count());
  EXPECT_TRUE(out.fast_path);
  for (std::size_t j = 0; j < out.u_count(); ++j) EXPECT_EQ(out.psi.merlin_alphabets()[j], 3u);
  EXPECT_EQ(out.params.nu, out.params.eta * out.params.beta * out.params.gamma / 4);
}

TEST(Reduction, CompletenessOnToy) {
  const auto c = complement(3);
  const auto out = build_stochastic_csp(c);
  for (std::uint64_t v = 0; v < 8; ++v) {
    const auto r = oracle::bits_of(v, 3);
    const auto w = find_witness(c, r);
    ASSERT_TRUE(w.has_value());
    const auto z = honest_proof(out, r, *w);
    EXPECT_EQ(val(out.psi, {r, z}), 1);
    EXPECT_EQ(honest_proof(out, r, *w), z);
    const auto pos = systematic_positions(out.code);
    for (std::size_t i = 0; i < w->size(); ++i) EXPECT_EQ(z[pos[i]], (*w)[i]);
    EXPECT_EQ(decoding_prover(out, r, z), *w);
  }
  EXPECT_THROW(honest_proof(out, BitString::parse("000"), BitString::parse("000")), ValidationError);
}

TEST(Reduction, SoundnessDeficitGrowsWithDistance) {
  const std::size_t l = 4;
  const auto c = members_only(l, {0b0000});
  const auto out = build_stochastic_csp(c);
  const auto prof = sat_profile(c);
  const auto dist = prof.distance_table();
  const auto gp = gap_profile(out.psi);
  ASSERT_TRUE(gp.exhaustive);
  const std::size_t m = out.psi.num_constraints();
  const std::size_t b = out.params.blocks;
  Rational previous = 1;
  for (std::uint64_t v = 0; v < (1u << l); ++v) {
    const auto best = rat(gp.records[v].max_satisfied, m);
    const auto d = static_cast<std::size_t>(dist[v]);
    // The nearest member of Q^{-1}(1) differs in b copies of each differing r bit.
    EXPECT_EQ(best, 1 - rat(b * d, m)) << v;
    if (d > 0) EXPECT_LT(best, 1);
  }
  for (std::size_t d = 0; d <= l; ++d) {
    const Rational now = 1 - rat(b * d, m);
    EXPECT_LE(now, previous);
    previous = now;
  }
  const auto cm = soundness_constant(out, gp, dist);
  ASSERT_TRUE(cm.has_value());
  EXPECT_EQ(*cm, rat(b * l, m));
}

TEST(Reduction, UnsatisfiableSource) {
  Circuit c(2, 2, "never");
  c.set_output(c.add_gate(GateOp::Const0));
  const auto out = build_stochastic_csp(c);
  const auto gp = gap_profile(out.psi);
  Rational worst = 0;
  for (const auto& rec : gp.records) worst = std::max(worst, rat(rec.max_satisfied, out.psi.num_constraints()));
  EXPECT_LT(worst, 1);
}

TEST(Reduction, NonBooleanSymbolsOnlyHurt) {
  const auto c = complement(3);
  const auto out = build_stochastic_csp(c);
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const auto r = gen::bits(rng, 3);
    auto z = honest_proof(out, r, *find_witness(c, r));
    // Random corruption, including non-Boolean symbols.
    for (int k = 0; k < 5; ++k) z[rng.below(out.u_count())] = static_cast<Symbol>(rng.below(3));
    const auto j = rng.below(out.u_count());
    auto bad = z, as0 = z, as1 = z;
    bad[j] = 2;
    as0[j] = 0;
    as1[j] = 1;
    const auto vb = val(out.psi, {r, bad});
    ASSERT_LE(vb, val(out.psi, {r, as0}));
    ASSERT_LE(vb, val(out.psi, {r, as1}));
  }
}

TEST(Reduction, DecodingProverToleratesCorruption) {
  const auto c = complement(3);
  const auto out = build_stochastic_csp(c);
  Rng rng(62);
  for (int t = 0; t < 300; ++t) {
    const auto r = gen::bits(rng, 3);
    const auto w = *find_witness(c, r);
    auto z = honest_proof(out, r, w);
    const auto errors = rng.below(out.code.radius() + 1);
    for (std::size_t k = 0; k < errors; ++k) {
      const auto j = rng.below(out.u_count());
      z[j] = z[j] == 1 ? static_cast<Symbol>(2 * rng.bit()) : 1;
    }
    ASSERT_EQ(decoding_prover(out, r, z), w);
  }
}

TEST(Reduction, PaddingShortWitness) {
  // N = 1 < l = 3: the witness is padded to 3 bits with forced zeros.
  Circuit c(3, 1, "short");
  CircuitBuilder b(c);
  c.set_output(b.xor_(c.r(0), c.w(0)));
  const auto out = build_stochastic_csp(c);
  EXPECT_EQ(out.witness_bits, 1u);
  EXPECT_EQ(out.source.w_len(), 3u);
  for (std::uint64_t v = 0; v < 8; ++v) {
    const auto r = oracle::bits_of(v, 3);
    const auto w = *find_witness(c, r);
    const auto z = honest_proof(out, r, w);
    ASSERT_EQ(val(out.psi, {r, z}), 1);
    ASSERT_EQ(decoding_prover(out, r, z), w);
  }
}

TEST(Reduction, DecodingChain) {
  for (const auto& c : {complement(3), members_only(4, {0, 5, 9})}) {
    const auto out = build_stochastic_csp(c);
    const auto rep = check_decoding_chain(out);
    EXPECT_GT(rep.assignments, 0u);
    EXPECT_EQ(rep.failures, 0u) << rep.first_failure.value_or("");
  }
  ReductionOptions wide;
  wide.epsilon = 1;
  const auto out = build_stochastic_csp(members_only(4, {3, 12}), wide);
  const auto rep = check_decoding_chain(out);
  EXPECT_EQ(rep.failures, 0u) << rep.first_failure.value_or("");
}

TEST(SmoothedProver, DegenerateBall) {
  const auto c = complement(3);
  const auto out = build_stochastic_csp(c);  // gamma = 7/64, gamma * 3 < 1
  const Prover honest = [&](const BitString& r) { return honest_proof(out, r, *find_witness(c, r)); };
  const auto rep = measure_smoothed_prover(out, honest, 500, 3);
  EXPECT_EQ(rep.radius, 0u);
  EXPECT_EQ(rep.ball_volume, 1u);
  EXPECT_EQ(rep.successes, 500u);
  EXPECT_EQ(rep.base_success, 1);
}

TEST(SmoothedProver, MeetsVolumeBound) {
  const std::size_t l = 8;
  std::vector<std::uint64_t> members;
  for (std::uint64_t v = 0; v < 256; v += 37) members.push_back(v);
  const auto c = members_only(l, members);
  ReductionOptions opt;
  opt.epsilon = 1;
  const auto out = build_stochastic_csp(c, opt);
  ASSERT_EQ(out.params.gamma, make_rational(1, 2));
  // P answers honestly on half of the members and with zeros elsewhere.
  const Prover p = [&](const BitString& r) {
    const auto idx = r.to_index();
    const auto w = find_witness(c, r);
    if (w && idx % 2 == 0) return honest_proof(out, r, *w);
    return std::vector<Symbol>(out.psi.merlin_count(), 0);
  };
  const auto rep = measure_smoothed_prover(out, p, 10000, 4);
  EXPECT_EQ(rep.radius, 4u);
  EXPECT_EQ(rep.ball_volume, 163u);
  std::size_t even = 0;
  for (const auto m : members) even += m % 2 == 0;
  EXPECT_EQ(rep.base_success, rat(even, 256));
  EXPECT_GE(rep.rate + 3 * rep.std_error, rep.bound);
  ASSERT_TRUE(rep.best_fixed_rate.has_value());
  EXPECT_GE(to_double(*rep.best_fixed_rate), rep.bound);

  const Prover never = [&](const BitString&) { return std::vector<Symbol>(out.psi.merlin_count(), 0); };
  Circuit none = members_only(l, {});
  const auto out0 = build_stochastic_csp(none, opt);
  const Prover never0 = [&](const BitString&) { return std::vector<Symbol>(out0.psi.merlin_count(), 0); };
  EXPECT_EQ(measure_smoothed_prover(out0, never0, 1000, 5).successes, 0u);
  (void)never;
}

TEST(SmoothedProver, Deterministic) {
  const auto c = members_only(6, {1, 2, 40});
  ReductionOptions opt;
  opt.epsilon = 1;
  const auto out = build_stochastic_csp(c, opt);
  const Prover p = [&](const BitString& r) {
    const auto w = find_witness(c, r);
    return w ? honest_proof(out, r, *w) : std::vector<Symbol>(out.psi.merlin_count(), 0);
  };
  const auto a = measure_smoothed_prover(out, p, 3000, 8);
  const auto b = measure_smoothed_prover(out, p, 3000, 8);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_GT(a.successes, 0u);
}
