#include <gtest/gtest.h>

#include "amcsp/error.hpp"
#include "amcsp/protocol.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace amcsp;

namespace {

std::vector<bool> satisfiable_challenges(const Circuit& c) {
  std::vector<bool> out(std::size_t{1} << c.r_len(), false);
  for (const auto& x : oracle::accepting(c)) out[x.slice(0, c.r_len()).to_index()] = true;
  return out;
}

Rational fraction(std::size_t a, std::size_t b) { return Rational(BigInt(a), BigInt(b)); }

}  // namespace

TEST(Soundness, Examples) {
  EXPECT_EQ(measure_soundness(trivial_protocol("one", 4, 2)).value, 1);
  const auto zero = secret_protocol("zero", BitString(5), 5, 0);
  EXPECT_EQ(measure_soundness(zero).value, make_rational(1, 32));
  EXPECT_EQ(zero.yes, std::optional<bool>(false));
  EXPECT_TRUE(check_completeness(trivial_protocol("one", 3, 1)));
  EXPECT_FALSE(check_completeness(zero));
}

TEST(Soundness, SetSizeMatchesDirectCount) {
  Rng rng(91);
  for (int t = 0; t < 30; ++t) {
    const std::size_t l = 1 + rng.below(4), n = l + rng.below(3);
    std::vector<std::uint8_t> members(std::size_t{1} << n);
    for (auto& m : members) m = rng.below(4) == 0;
    const auto p = set_size_protocol("s", l, n, members);
    std::vector<bool> covered(std::size_t{1} << l, false);
    for (std::size_t x = 0; x < members.size(); ++x) {
      if (members[x]) covered[x >> (n - l)] = true;
    }
    const auto hit = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
    ASSERT_EQ(measure_soundness(p).value, fraction(hit, covered.size()));
  }
}

TEST(Soundness, SampledEstimate) {
  const auto p = planted_protocol("p", 8, 2, 64, 5);
  const auto exact = measure_soundness(p);
  EXPECT_EQ(exact.value, make_rational(1, 4));
  SoundnessOptions opt;
  opt.mode = MeasureMode::Sampled;
  opt.trials = 20000;
  opt.seed = 3;
  const auto s = measure_soundness(p, opt);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_NEAR(to_double(s.value), 0.25, 3 * s.std_error);
  EXPECT_EQ(measure_soundness(p, opt).accepting, s.accepting);
}

TEST(ParallelRepeat, Identity) {
  const auto p = planted_protocol("p", 3, 2, 3, 1);
  const auto q = parallel_repeat(p, 1);
  EXPECT_EQ(q.verifier, p.verifier);
  EXPECT_THROW(parallel_repeat(p, 0), ValidationError);
}

TEST(ParallelRepeat, SoundnessIsMultiplicative) {
  const auto half = secret_protocol("half", BitString::parse("101"), 1, 2);
  EXPECT_EQ(measure_soundness(half).value, make_rational(1, 2));
  const auto three = parallel_repeat(half, 3);
  EXPECT_EQ(three.r_len(), 9u);
  EXPECT_EQ(three.w_len(), 6u);
  EXPECT_EQ(measure_soundness(three).value, make_rational(1, 8));

  Rng rng(92);
  for (int t = 0; t < 10; ++t) {
    const std::size_t l = 1 + rng.below(4);
    const auto p = planted_protocol("p", l, 1 + rng.below(2), 1 + rng.below((1u << l) - 1), rng.next());
    const auto s = measure_soundness(p).value;
    for (std::size_t reps = 1; reps * l <= 12 && reps * p.w_len() <= 10; ++reps) {
      Rational pow = 1;
      for (std::size_t i = 0; i < reps; ++i) pow *= s;
      ASSERT_EQ(measure_soundness(parallel_repeat(p, reps)).value, pow);
    }
  }
}

TEST(ParallelRepeat, KeepsCompleteness) {
  const auto yes = planted_protocol("y", 3, 2, 8, 4);
  ASSERT_TRUE(check_completeness(yes));
  EXPECT_TRUE(check_completeness(parallel_repeat(yes, 3)));
}

TEST(ExpanderRepeat, SeedLengthAndIdentity) {
  const auto p = planted_protocol("p", 4, 2, 4, 6);
  const auto g = build_margulis(4);
  EXPECT_EQ(expander_repeat(p, g, 1).verifier, p.verifier);
  for (const std::size_t t : {2u, 3u, 4u, 8u}) {
    const auto q = expander_repeat(p, g, t);
    EXPECT_EQ(q.r_len(), 4 + 3 * (t - 1));
    EXPECT_LT(q.r_len(), t * p.r_len());
    EXPECT_TRUE(q.experimental);
  }
  EXPECT_THROW(expander_repeat(p, build_margulis(8), 2), ValidationError);
  EXPECT_THROW(expander_repeat(planted_protocol("q", 3, 1, 2, 1), build_margulis(4), 2), ValidationError);
}

TEST(ExpanderRepeat, SoundnessMatchesWalkCount) {
  Rng rng(93);
  for (int trial = 0; trial < 6; ++trial) {
    const auto p = planted_protocol("p", 4, 1, 1 + rng.below(15), rng.next());
    const auto g = build_margulis(4);
    const auto sat = satisfiable_challenges(p.verifier);
    for (const std::size_t t : {2u, 3u}) {
      const auto q = expander_repeat(p, g, t);
      const std::size_t bits = walk_seed_bits(g, t);
      std::size_t good = 0;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << bits); ++s) {
        const auto w = walk_from_bits(g, t, oracle::bits_of(s, bits));
        bool all = true;
        for (const auto v : w.vertices) all = all && sat[v];
        good += all;
      }
      ASSERT_EQ(measure_soundness(q).value, fraction(good, std::size_t{1} << bits));
    }
  }
}

TEST(ExpanderRepeat, ComparedWithParallel) {
  // On the 16-vertex graph the walk loses to independent copies quickly:
  // within a factor 4 of s^t at t = 2, but not at t = 4 (31/1024 vs 1/256).
  const auto p = planted_protocol("p", 4, 2, 4, 11);
  const auto s = measure_soundness(p).value;
  ASSERT_EQ(s, make_rational(1, 4));
  const auto g = build_margulis(4);
  const auto two = measure_soundness(expander_repeat(p, g, 2)).value;
  EXPECT_LE(two, 4 * s * s);
  EXPECT_LT(two, s);
  const auto four = measure_soundness(expander_repeat(p, g, 4)).value;
  RecordProperty("walk_soundness_t4", to_string(four));
  EXPECT_LT(four, two);
  EXPECT_GT(four, 4 * s * s * s * s);
}

TEST(Corpus, LabelsMatchMeasuredSoundness) {
  const auto corpus = toy_corpus(1);
  EXPECT_GE(corpus.size(), 6u);
  for (const auto& p : corpus) {
    ASSERT_TRUE(p.yes.has_value()) << p.id;
    const auto s = measure_soundness(p).value;
    if (*p.yes) {
      EXPECT_TRUE(check_completeness(p)) << p.id;
    } else {
      EXPECT_LE(s, p.soundness_target) << p.id;
    }
  }
  EXPECT_EQ(toy_corpus(1)[3].verifier, corpus[3].verifier);
}

TEST(Pipeline, YesInstancesAreFullySatisfiable) {
  for (const auto& amp : {"parallel", "expander"}) {
    for (const auto& p : toy_corpus(2)) {
      if (!*p.yes) continue;
      PipelineOptions opt;
      opt.amplifier = amp;
      opt.t = 2;
      const auto res = theorem1_pipeline(p, opt);
      const auto a = analyze_pipeline(res);
      ASSERT_TRUE(a.profile.exhaustive);
      EXPECT_EQ(a.fraction_full, 1) << p.id;
      EXPECT_EQ(a.verdict, Verdict::Yes) << p.id << " " << amp;
      for (const auto& rec : a.profile.records) ASSERT_EQ(rec.max_satisfied, a.profile.constraints);
    }
  }
}

TEST(Pipeline, NoInstancesBelowCountingBound) {
  for (const std::size_t t : {1u, 2u, 3u}) {
    for (const auto& p : toy_corpus(3)) {
      if (*p.yes) continue;
      PipelineOptions opt;
      opt.t = t;
      const auto res = theorem1_pipeline(p, opt);
      if (res.amplified.r_len() > 12) continue;
      const auto a = analyze_pipeline(res);
      EXPECT_EQ(res.amplified.repetitions, t);
      ASSERT_TRUE(a.bound_applies) << p.id;
      EXPECT_LT(entropy(a.alpha), 1.0 / a.D) << p.id;
      EXPECT_LE(a.fraction_above, a.bound) << p.id << " t=" << t;
      EXPECT_LT(a.fraction_full, 1) << p.id;
      // bound = V(l2, radius) 2^{(1 - 1/D) l2} / 2^{l2}, with (1 - 1/D) l2 = l2 - l1.
      const auto expect = Rational(oracle::volume(a.l2, a.radius), BigInt(1) << a.l1);
      EXPECT_EQ(a.bound, std::min(Rational(1), expect)) << p.id;
    }
  }
}

TEST(Pipeline, TrivialVerifier) {
  const auto res = theorem1_pipeline(trivial_protocol("one", 3, 1));
  EXPECT_EQ(analyze_pipeline(res).verdict, Verdict::Yes);
}

TEST(ChooseAlpha, EntropyBelowReciprocal) {
  for (const double D : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    const auto a = choose_alpha(D);
    ASSERT_TRUE(a.has_value());
    EXPECT_LT(entropy(*a), 1.0 / D);
    EXPECT_GE(entropy(*a + make_rational(1, 64)), 1.0 / D);
  }
}
