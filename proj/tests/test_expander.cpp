#include <gtest/gtest.h>

#include <cmath>
#include <queue>

#include "amcsp/error.hpp"
#include "amcsp/expander.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace amcsp;

namespace {

bool connected(const ExpanderGraph& g) {
  std::vector<bool> seen(g.vertices(), false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (std::size_t p = 0; p < g.degree(); ++p) {
      const auto u = g.neighbor(v, p);
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        q.push(u);
      }
    }
  }
  return count == g.vertices();
}

}  // namespace

TEST(Margulis, SmallestGraph) {
  const auto g = build_margulis(2);
  EXPECT_EQ(g.vertices(), 4u);
  EXPECT_EQ(g.degree(), 8u);
  EXPECT_EQ(g.table().size(), 32u);
  EXPECT_TRUE(connected(g));
  EXPECT_TRUE(g.symmetric());
  EXPECT_THROW(build_margulis(1), ValidationError);
}

TEST(Margulis, PortInverses) {
  for (const std::size_t m : {2u, 3u, 5u, 8u, 9u, 16u}) {
    const auto g = build_margulis(m);
    ASSERT_EQ(g.side(), m);
    for (std::size_t v = 0; v < g.vertices(); ++v) {
      for (std::size_t p = 0; p < 8; ++p) {
        ASSERT_EQ(g.neighbor(g.neighbor(v, p), (p + 4) % 8), v) << m << " " << v << " " << p;
      }
    }
  }
}

TEST(Margulis, AffineMaps) {
  const std::size_t m = 7;
  const auto g = build_margulis(m);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      const auto v = x * m + y;
      EXPECT_EQ(g.neighbor(v, 0), ((x + 2 * y) % m) * m + y);
      EXPECT_EQ(g.neighbor(v, 1), ((x + 2 * y + 1) % m) * m + y);
      EXPECT_EQ(g.neighbor(v, 2), x * m + (y + 2 * x) % m);
      EXPECT_EQ(g.neighbor(v, 3), x * m + (y + 2 * x + 1) % m);
    }
  }
}

TEST(SecondEigenvalue, MatchesDenseSolver) {
  std::vector<ExpanderGraph> graphs{build_margulis(2), build_margulis(4), build_margulis(8), build_margulis(9),
                                    build_complete(5), build_complete(6, true), build_cycle(7)};
  for (auto& g : graphs) {
    const double got = second_eigenvalue(g);
    EXPECT_NEAR(got, oracle::lambda(g), 1e-6) << g.family() << " " << g.vertices();
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0 + 1e-9);
  }
}

TEST(SecondEigenvalue, Examples) {
  for (const std::size_t n : {3u, 4u, 8u, 12u}) {
    EXPECT_NEAR(second_eigenvalue(build_complete(n)), 1.0 / static_cast<double>(n - 1), 1e-6);
  }
  EXPECT_NEAR(second_eigenvalue(disjoint_union(build_complete(4), build_complete(4))), 1.0, 1e-6);
  EXPECT_NEAR(second_eigenvalue(build_cycle(4)), 1.0, 1e-6);
  // Rank-one transition matrices: every non-trivial eigenvalue is 0.
  for (const std::size_t n : {6u, 20u, 81u, 256u}) EXPECT_NEAR(second_eigenvalue(build_complete(n, true)), 0.0, 1e-6);
  auto g = build_margulis(8);
  const double lam = g.measure_lambda();
  EXPECT_LE(lam, 0.98);
  EXPECT_LT(lam, 1.0);
  ASSERT_TRUE(g.lambda().has_value());
  EXPECT_EQ(*g.lambda(), lam);
  EXPECT_THROW(second_eigenvalue(build_margulis(16), 100), LimitError);
}

TEST(Chernoff, Examples) {
  EXPECT_DOUBLE_EQ(chernoff_bound(0, 0.3, 10), 2.0);
  EXPECT_DOUBLE_EQ(chernoff_bound(0.4, 1, 100), 2.0);
  EXPECT_NEAR(chernoff_bound(0.5, 0.5, 32), 2 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(chernoff_bound(0.5, 0.5, 32), 0.735759, 1e-6);
  EXPECT_THROW(chernoff_bound(-1, 0.5, 3), ValidationError);
  EXPECT_THROW(chernoff_bound(0.1, 1.5, 3), ValidationError);
}

TEST(Walk, SeedBitsAndShape) {
  const auto g = build_margulis(4);
  EXPECT_EQ(walk_seed_bits(g, 1), 4u);
  EXPECT_EQ(walk_seed_bits(g, 5), 4u + 4 * 3);
  const auto w = sample_walk(g, 6, 77);
  EXPECT_EQ(w.vertices.size(), 6u);
  EXPECT_EQ(w.seed_bits, walk_seed_bits(g, 6));
  for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) {
    bool adjacent = false;
    for (std::size_t p = 0; p < g.degree(); ++p) adjacent |= g.neighbor(w.vertices[i], p) == w.vertices[i + 1];
    ASSERT_TRUE(adjacent);
  }
  EXPECT_EQ(sample_walk(g, 6, 77).vertices, w.vertices);
  EXPECT_THROW(sample_walk(g, 0, 1), ValidationError);
}

TEST(Walk, FromBits) {
  const auto g = build_margulis(4);
  Rng rng(71);
  for (int t = 0; t < 200; ++t) {
    const auto bits = gen::bits(rng, walk_seed_bits(g, 4));
    const auto w = walk_from_bits(g, 4, bits);
    std::size_t v = bits.slice(0, 4).to_index();
    ASSERT_EQ(w.vertices[0], v);
    for (std::size_t i = 1; i < 4; ++i) {
      v = g.neighbor(v, bits.slice(4 + 3 * (i - 1), 3).to_index());
      ASSERT_EQ(w.vertices[i], v);
    }
  }
  EXPECT_THROW(walk_from_bits(build_margulis(3), 2, BitString(7)), ValidationError);
}

TEST(Walk, StationaryMarginals) {
  // 16 vertices, 15 degrees of freedom; 37.7 is the 0.999 quantile.
  const auto g = build_margulis(4);
  const std::size_t walks = 100000;
  std::vector<std::vector<double>> counts(8, std::vector<double>(16, 0));
  for (std::size_t s = 0; s < walks; ++s) {
    const auto w = sample_walk(g, 8, derive_seed(5, s));
    for (std::size_t i = 0; i < 8; ++i) counts[i][w.vertices[i]] += 1;
  }
  const double expected = static_cast<double>(walks) / 16;
  for (std::size_t i = 0; i < 8; ++i) {
    double chi = 0;
    for (const double c : counts[i]) chi += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi, 37.7) << "step " << i;
  }
}

TEST(Deviation, ConstantFunctions) {
  const auto g = build_margulis(9);
  std::vector<VertexFunction> fs(16, VertexFunction{std::vector<double>(81, 0.25), 0.25});
  const auto r = empirical_deviation(g, fs, 0.01, 2000, 3);
  EXPECT_EQ(r.hits, 0u);
  EXPECT_EQ(r.frequency, 0.0);
}

TEST(Deviation, DeclaredMeanMustMatch) {
  const auto g = build_margulis(3);
  std::vector<VertexFunction> fs{VertexFunction{std::vector<double>(9, 1.0), 0.5}};
  EXPECT_THROW(empirical_deviation(g, fs, 0.1, 10, 1), ValidationError);
}

TEST(Deviation, RandomIndicator) {
  const auto f = random_indicator(81, 41, 9);
  double sum = 0;
  for (const double v : f.values) {
    ASSERT_TRUE(v == 0.0 || v == 1.0);
    sum += v;
  }
  EXPECT_EQ(sum, 41.0);
  EXPECT_DOUBLE_EQ(f.mean, 41.0 / 81);
}

TEST(Deviation, WithinChernoffBound) {
  auto g = build_margulis(9);
  const double lam = g.measure_lambda();
  std::vector<VertexFunction> fs;
  for (std::size_t i = 0; i < 64; ++i) fs.push_back(random_indicator(81, 41, derive_seed(12, i)));
  const auto r = empirical_deviation(g, fs, 0.2, 20000, 13);
  EXPECT_LE(r.frequency, chernoff_bound(0.2, lam, 64) + 3 * r.std_error);
  EXPECT_NEAR(r.std_error, binomial_std_error(r.frequency, 20000), 1e-15);
  const auto again = empirical_deviation(g, fs, 0.2, 20000, 13);
  EXPECT_EQ(again.hits, r.hits);
}

TEST(MargulisStep, MatchesRotationTable) {
  for (const std::size_t h : {1u, 2u, 3u}) {
    const std::size_t m = std::size_t{1} << h;
    const auto g = build_margulis(m);
    Circuit c(2 * h + 3, 0);
    CircuitBuilder b(c);
    std::vector<WireId> vertex, port;
    for (std::size_t i = 0; i < 2 * h; ++i) vertex.push_back(c.r(i));
    for (std::size_t i = 0; i < 3; ++i) port.push_back(c.r(2 * h + i));
    const auto out = margulis_step(b, vertex, port);
    ASSERT_EQ(out.size(), 2 * h);
    for (std::size_t v = 0; v < m * m; ++v) {
      for (std::size_t p = 0; p < 8; ++p) {
        const auto x = BitString::concat(oracle::bits_of(v, 2 * h), oracle::bits_of(p, 3));
        std::uint64_t got = 0;
        for (const auto wire : out) {
          Circuit probe = c;
          probe.set_output(wire);
          got = (got << 1) | (oracle::eval(probe, x) ? 1 : 0);
        }
        ASSERT_EQ(got, g.neighbor(v, p)) << h << " " << v << " " << p;
      }
    }
  }
}
