#include <gtest/gtest.h>

#include "amcsp/error.hpp"
#include "amcsp/formats.hpp"
#include "amcsp/reduction.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace amcsp;

namespace {

std::size_t error_line(const std::string& text, Csp (*parse)(std::string_view)) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::size_t circuit_error_line(const std::string& text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(CircuitFormat, ParseExample) {
  const auto c = parse_circuit(
      "# comment\n"
      "circuit l=2 N=1 name=demo\n"
      "g0 = AND r0 w0\n"
      "g1 = NOT g0\n"
      "g2 = XOR g1 r1\n"
      "output g2\n");
  EXPECT_EQ(c.r_len(), 2u);
  EXPECT_EQ(c.w_len(), 1u);
  EXPECT_EQ(c.name(), "demo");
  EXPECT_EQ(c.size(), 3u);
  EXPECT_TRUE(c.eval(BitString::parse("00"), BitString::parse("0")));
  EXPECT_FALSE(c.eval(BitString::parse("10"), BitString::parse("1")));
  const auto unicode = parse_circuit("circuit \xe2\x84\x93=1 N=0\ng0 = CONST1\noutput g0\n");
  EXPECT_EQ(unicode.r_len(), 1u);
}

TEST(CircuitFormat, RoundTripRandom) {
  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const auto c = gen::circuit(rng, 1 + rng.below(5), rng.below(5), 1 + rng.below(30));
    const auto text = write_circuit(c);
    const auto back = parse_circuit(text);
    ASSERT_EQ(back, c);
    ASSERT_EQ(write_circuit(back), text);
  }
}

TEST(CircuitFormat, ErrorsCarryLineNumbers) {
  EXPECT_EQ(circuit_error_line("circuit l=1 N=1\ng0 = AND r0 w3\noutput g0\n"), 2u);
  EXPECT_EQ(circuit_error_line("circuit l=1 N=1\ng0 = NAND r0 w0\noutput g0\n"), 2u);
  EXPECT_EQ(circuit_error_line("circuit l=1 N=1\ng1 = AND r0 w0\noutput g1\n"), 2u);
  EXPECT_EQ(circuit_error_line("circuit l=1 N=1\ng0 = AND r0 g0\noutput g0\n"), 2u);
  EXPECT_EQ(circuit_error_line("circuit l=1 N=1\ng0 = AND r0 w0\noutput g0\ng1 = NOT g0\n"), 4u);
  EXPECT_EQ(circuit_error_line("circuit l=1 N=1\ng0 = AND r0 w0\noutput g0\ntrailing\n"), 4u);
  EXPECT_EQ(circuit_error_line("circ l=1 N=1\n"), 1u);
  EXPECT_GT(circuit_error_line("circuit l=1 N=1\ng0 = AND r0 w0\n"), 0u);  // no output
  EXPECT_EQ(circuit_error_line("\n\ncircuit l=1 N=x\n"), 3u);
  try {
    parse_circuit("circuit l=1 N=1\ng0 = AND r0 w3\noutput g0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 2: ", 0), 0u);
  }
}

TEST(CspFormat, RoundTripRandom) {
  Rng rng(102);
  for (int t = 0; t < 100; ++t) {
    auto c = gen::csp(rng, 1 + rng.below(4), rng.below(5), 4, rng.below(10));
    if (c.merlin_count() > 0 && rng.bit()) c.set_hub(rng.below(c.merlin_count()));
    c.set_meta("source", "random test");
    c.set_meta("eta", "3/64");
    const auto text = write_csp(c);
    const auto back = parse_csp(text);
    ASSERT_EQ(back, c);
    ASSERT_EQ(write_csp(back), text);
  }
}

TEST(CspFormat, ReductionOutputRoundTrips) {
  Circuit c(1, 1, "and");
  c.set_output(c.add_gate(GateOp::And, 0, 1));
  const auto out = build_stochastic_csp(c);
  const auto back = parse_csp(write_csp(out.psi));
  EXPECT_EQ(back, out.psi);
  EXPECT_EQ(back.hub(), out.psi.hub());
  const auto eta = parse_rational(*back.meta_value("eta"));
  const auto beta = parse_rational(*back.meta_value("beta"));
  const auto gamma = parse_rational(*back.meta_value("gamma"));
  EXPECT_EQ(parse_rational(*back.meta_value("nu")), eta * beta * gamma / 4);
}

TEST(CspFormat, Errors) {
  EXPECT_EQ(error_line("csp arthur=1 merlin= arity=2\nscope r0 ; table 012\n", parse_csp), 2u);
  EXPECT_EQ(error_line("csp arthur=1 merlin=2 arity=2\nscope r0 z0 ; table 01\n", parse_csp), 2u);
  EXPECT_EQ(error_line("csp arthur=1 merlin=2 arity=2\nscope r0 z5 ; table 0110\n", parse_csp), 2u);
  EXPECT_EQ(error_line("csp arthur=1 merlin=2 arity=2\nscope r0 ; table 01 junk\n", parse_csp), 2u);
  EXPECT_EQ(error_line("# meta fast_path=hub:x\ncsp arthur=1 merlin=2 arity=2\n", parse_csp), 1u);
  EXPECT_EQ(error_line("scope r0 ; table 01\n", parse_csp), 1u);
  EXPECT_EQ(error_line("csp arthur=1 merlin=2 arity=2\n\n\ncsp arthur=1 merlin=2 arity=2\n", parse_csp), 4u);
}

TEST(LanguageFormat, RoundTrip) {
  for (const auto& L : {language_parity(4), language_random(6, 9, make_rational(1, 2)), language_bitmap(3, "a5")}) {
    const auto back = parse_language(write_language(L));
    EXPECT_EQ(back.member, L.member);
    EXPECT_EQ(back.block_len, L.block_len);
  }
  const auto r = parse_language("language block_len=6\npredicate RANDOM(7,1/2)\n");
  EXPECT_EQ(r.member, language_random(6, 7, make_rational(1, 2)).member);
  EXPECT_EQ(parse_language("language block_len=3\npredicate MAJORITY\n").member, language_majority(3).member);
  EXPECT_THROW(parse_language("language block_len=3\npredicate FOO\n"), ParseError);
  EXPECT_THROW(parse_language("language block_len=3\nbitmap a5\nbitmap a5\n"), ParseError);
}

TEST(CorpusFormat, RoundTripAndLoad) {
  const std::vector<CorpusEntry> entries{{"a", "x.circuit", true, 2, 1}, {"b", "y.circuit", false, 3, 0},
                                         {"c", "z.circuit", std::nullopt, 1, 1}};
  const auto text = write_corpus(entries);
  const auto back = parse_corpus(text);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].id, entries[i].id);
    EXPECT_EQ(back[i].circuit_path, entries[i].circuit_path);
    EXPECT_EQ(back[i].yes, entries[i].yes);
    EXPECT_EQ(back[i].r_len, entries[i].r_len);
    EXPECT_EQ(back[i].w_len, entries[i].w_len);
  }
  EXPECT_THROW(parse_corpus("protocol-corpus v2\n"), ParseError);
  EXPECT_THROW(parse_corpus("protocol-corpus v1\na x.circuit MAYBE 1 1\n"), ParseError);

  const auto loaded = load_corpus(AMCSP_DATA_DIR "/corpus/small.corpus");
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].yes, std::optional<bool>(true));
  EXPECT_EQ(loaded[1].yes, std::optional<bool>(false));
  EXPECT_EQ(loaded[1].r_len(), 3u);
}

TEST(CorpusFormat, ShapeMismatchRejected) {
  const std::string dir = testing::TempDir();
  write_file(dir + "/c.circuit", "circuit l=2 N=1\ng0 = AND r0 w0\noutput g0\n");
  write_file(dir + "/bad.corpus", "protocol-corpus v1\nx c.circuit YES 3 1\n");
  EXPECT_THROW(load_corpus(dir + "/bad.corpus"), ValidationError);
}
