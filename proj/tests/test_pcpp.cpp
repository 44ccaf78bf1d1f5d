#include <gtest/gtest.h>

#include "amcsp/error.hpp"
#include "amcsp/pcpp.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace amcsp;

namespace {

Circuit and2() {
  Circuit c(2, 0, "and2");
  c.set_output(c.add_gate(GateOp::And, 0, 1));
  return c;
}

Circuit constant(std::size_t n, bool value) {
  Circuit c(n, 0);
  c.set_output(c.add_gate(value ? GateOp::Const1 : GateOp::Const0));
  return c;
}

// max over the single proof variable by plain enumeration.
Rational best_val(const PcppOutput& p, const BitString& x) {
  return Rational(BigInt(oracle::max_satisfied(p.csp, x)), BigInt(p.csp.num_constraints()));
}

}  // namespace

TEST(EnumerativePcpp, AndExamples) {
  const auto p = build_enumerative_pcpp(and2());
  EXPECT_EQ(p.csp.arity(), 2u);
  EXPECT_EQ(p.proof_size, 1u);
  EXPECT_EQ(p.alphabet_size, 1u);
  EXPECT_EQ(p.claimed_beta, 1);
  EXPECT_FALSE(p.constant_alphabet);
  const auto z = p.honest_proof(BitString::parse("11"));
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ(val(p.csp, {BitString::parse("11"), *z}), 1);
  EXPECT_FALSE(p.honest_proof(BitString::parse("01")).has_value());
  EXPECT_EQ(best_val(p, BitString::parse("01")), make_rational(1, 2));
  EXPECT_EQ(best_val(p, BitString::parse("00")), 0);
}

TEST(EnumerativePcpp, AlwaysFalse) {
  const auto c = constant(3, false);
  const auto p = build_enumerative_pcpp(c);
  EXPECT_EQ(p.alphabet_size, 1u);
  EXPECT_EQ(p.csp.num_constraints(), 1u);
  for (std::uint64_t v = 0; v < 8; ++v) {
    EXPECT_LE(best_val(p, oracle::bits_of(v, 3)), 1 - p.claimed_beta);
  }
  EXPECT_FALSE(check_pcpp_contract(c, p).has_value());
  EXPECT_TRUE(certify_security(c, p).vacuous);
}

TEST(EnumerativePcpp, AlwaysTrueIsVacuous) {
  const auto c = constant(3, true);
  const auto p = build_enumerative_pcpp(c);
  EXPECT_EQ(p.alphabet_size, 8u);
  const auto s = certify_security(c, p);
  EXPECT_TRUE(s.vacuous);
}

TEST(EnumerativePcpp, CertifiedSecurityOfAnd) {
  const auto c = and2();
  const auto s = certify_security(c, build_enumerative_pcpp(c));
  ASSERT_FALSE(s.vacuous);
  EXPECT_EQ(s.beta, 1);
}

TEST(EnumerativePcpp, ContractOnRandomCircuits) {
  Rng rng(51);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const auto c = gen::circuit(rng, n, 0, 1 + rng.below(10));
    const auto p = build_pcpp(c, "enumerative");
    ASSERT_EQ(p.csp.arity(), 2u);
    const auto acc = oracle::accepting(c);
    ASSERT_EQ(p.alphabet_size, acc.empty() ? 1u : acc.size());
    ASSERT_FALSE(check_pcpp_contract(c, p).has_value()) << *check_pcpp_contract(c, p);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
      const auto x = oracle::bits_of(v, n);
      const long d = oracle::set_distance(x, acc);
      const auto best = best_val(p, x);
      if (d == 0) {
        const auto z = p.honest_proof(x);
        ASSERT_TRUE(z.has_value());
        ASSERT_EQ(val(p.csp, {x, *z}), 1);
      } else if (d > 0) {
        ASSERT_LE(best, 1 - p.claimed_beta * d / static_cast<long>(n));
      } else {
        ASSERT_LE(best, 1 - p.claimed_beta);
      }
    }
    const auto s = certify_security(c, p);
    if (!s.vacuous) ASSERT_GE(s.beta, p.claimed_beta);
  }
}

TEST(EnumerativePcpp, SuppliedAcceptingSet) {
  const auto c = and2();
  const std::vector<BitString> acc{BitString::parse("11"), BitString::parse("11")};
  const auto p = build_enumerative_pcpp(c, acc);
  EXPECT_EQ(p.alphabet_size, 1u);
  const std::vector<BitString> bad{BitString::parse("10")};
  EXPECT_THROW(build_enumerative_pcpp(c, bad), ValidationError);
}

TEST(PcppRegistry, Dispatch) {
  const auto ids = pcpp_backend_ids();
  EXPECT_NE(std::find(ids.begin(), ids.end(), "enumerative"), ids.end());
  EXPECT_THROW(build_pcpp(and2(), "dinur"), ValidationError);
  EXPECT_EQ(build_pcpp(and2(), "enumerative").csp, build_enumerative_pcpp(and2()).csp);
}

TEST(PcppRegistry, Limit) {
  Circuit c(24, 0);
  c.set_output(c.add_gate(GateOp::Const1));
  PcppBuildOptions opt;
  opt.max_inputs = 20;
  EXPECT_THROW(build_pcpp(c, "enumerative", opt), LimitError);
}
