#include "amcsp/expander.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "amcsp/error.hpp"
#include "amcsp/parallel.hpp"
#include "amcsp/rng.hpp"

namespace amcsp {

namespace {

std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

ExpanderGraph::ExpanderGraph(std::string family, std::size_t vertices, std::size_t degree,
                             std::vector<std::uint32_t> table)
    : family_(std::move(family)), vertices_(vertices), degree_(degree), table_(std::move(table)) {
  if (vertices == 0 || degree == 0) throw ValidationError("graph needs vertices and degree");
  if (table_.size() != vertices * degree) throw ValidationError("rotation table size mismatch");
  for (const auto v : table_) {
    if (v >= vertices) throw ValidationError("rotation table entry out of range");
  }
}

double ExpanderGraph::measure_lambda() {
  if (!lambda_) lambda_ = second_eigenvalue(*this);
  return *lambda_;
}

bool ExpanderGraph::symmetric() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fwd, rev;
  fwd.reserve(table_.size());
  rev.reserve(table_.size());
  for (std::size_t v = 0; v < vertices_; ++v) {
    for (std::size_t p = 0; p < degree_; ++p) {
      const auto u = neighbor(v, p);
      fwd.emplace_back(static_cast<std::uint32_t>(v), u);
      rev.emplace_back(u, static_cast<std::uint32_t>(v));
    }
  }
  std::sort(fwd.begin(), fwd.end());
  std::sort(rev.begin(), rev.end());
  return fwd == rev;
}

ExpanderGraph build_margulis(std::size_t m) {
  if (m < 2) throw ValidationError("build_margulis: m must be at least 2");
  if (m > 65535) throw LimitError("build_margulis: m too large");
  std::vector<std::uint32_t> t(m * m * 8);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      auto at = [&](std::size_t a, std::size_t b) { return static_cast<std::uint32_t>((a % m) * m + b % m); };
      const std::size_t base = (x * m + y) * 8;
      const std::size_t x2 = 2 * x % m, y2 = 2 * y % m;
      t[base + 0] = at(x + y2, y);
      t[base + 1] = at(x + y2 + 1, y);
      t[base + 2] = at(x, y + x2);
      t[base + 3] = at(x, y + x2 + 1);
      t[base + 4] = at(x + 2 * m - y2, y);
      t[base + 5] = at(x + 2 * m - y2 - 1, y);
      t[base + 6] = at(x, y + 2 * m - x2);
      t[base + 7] = at(x, y + 2 * m - x2 - 1);
    }
  }
  ExpanderGraph g("margulis", m * m, 8, std::move(t));
  g.set_side(m);
  return g;
}

ExpanderGraph build_complete(std::size_t n, bool self_loops) {
  if (n < 2) throw ValidationError("build_complete: n must be at least 2");
  const std::size_t d = self_loops ? n : n - 1;
  std::vector<std::uint32_t> t;
  t.reserve(n * d);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v || self_loops) t.push_back(static_cast<std::uint32_t>(u));
    }
  }
  return ExpanderGraph(self_loops ? "complete-loops" : "complete", n, d, std::move(t));
}

ExpanderGraph build_cycle(std::size_t n) {
  if (n < 3) throw ValidationError("build_cycle: n must be at least 3");
  std::vector<std::uint32_t> t;
  for (std::size_t v = 0; v < n; ++v) {
    t.push_back(static_cast<std::uint32_t>((v + 1) % n));
    t.push_back(static_cast<std::uint32_t>((v + n - 1) % n));
  }
  return ExpanderGraph("cycle", n, 2, std::move(t));
}

ExpanderGraph disjoint_union(const ExpanderGraph& a, const ExpanderGraph& b) {
  if (a.degree() != b.degree()) throw ValidationError("disjoint_union: degrees differ");
  std::vector<std::uint32_t> t = a.table();
  for (const auto v : b.table()) t.push_back(static_cast<std::uint32_t>(v + a.vertices()));
  return ExpanderGraph(a.family() + "+" + b.family(), a.vertices() + b.vertices(), a.degree(),
                       std::move(t));
}

double second_eigenvalue(const ExpanderGraph& g, std::size_t limit) {
  const std::size_t n = g.vertices();
  if (n > limit) {
    throw LimitError("second_eigenvalue: " + std::to_string(n) + " vertices exceed limit " +
                     std::to_string(limit));
  }
  if (!g.symmetric()) throw ValidationError("second_eigenvalue: graph is not undirected");
  if (n == 1) return 0;
  const std::size_t d = g.degree();
  const double inv_d = 1.0 / static_cast<double>(d);

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0;
      for (std::size_t p = 0; p < d; ++p) s += in[g.neighbor(v, p)];
      out[v] = s * inv_d;
    }
  };
  auto deflate = [&](std::vector<double>& x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double before = 0, norm = 0;
    for (auto& v : x) {
      before += v * v;
      v -= mean;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    // What survives removing the mean of a near-constant vector is rounding
    // noise, not a direction in the complement.
    if (norm <= 1e-12 * std::sqrt(before)) return 0.0;
    for (auto& v : x) v /= norm;
    return norm;
  };

  Rng rng(0x5eed);
  std::vector<double> x(n), y(n), z(n);
  for (auto& v : x) v = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 - 0.5;
  if (deflate(x) == 0) return 0;

  // Rayleigh quotient of the squared operator converges to lambda^2 from below.
  double previous = -1;
  double estimate = 0;
  std::size_t stable = 0;
  const std::size_t max_iter = 200000;
  for (std::size_t it = 0; it < max_iter; ++it) {
    apply(x, y);
    apply(y, z);
    double rq = 0;
    for (std::size_t v = 0; v < n; ++v) rq += x[v] * z[v];
    estimate = std::sqrt(std::max(0.0, rq));
    x.swap(z);
    if (deflate(x) == 0) return estimate;
    if (std::abs(estimate - previous) < 1e-12) {
      if (++stable >= 20) break;
    } else {
      stable = 0;
    }
    previous = estimate;
  }
  return std::min(1.0, estimate);
}

std::size_t walk_seed_bits(const ExpanderGraph& g, std::size_t m) {
  if (m == 0) throw ValidationError("walk length must be at least 1");
  return ceil_log2(g.vertices()) + (m - 1) * ceil_log2(g.degree());
}

Walk sample_walk(const ExpanderGraph& g, std::size_t m, std::uint64_t seed) {
  Walk w;
  w.seed = seed;
  w.seed_bits = walk_seed_bits(g, m);
  Rng rng(seed);
  std::uint32_t v = static_cast<std::uint32_t>(rng.below(g.vertices()));
  w.vertices.push_back(v);
  for (std::size_t i = 1; i < m; ++i) {
    v = g.neighbor(v, rng.below(g.degree()));
    w.vertices.push_back(v);
  }
  return w;
}

Walk walk_from_bits(const ExpanderGraph& g, std::size_t m, const BitString& bits) {
  if (!is_power_of_two(g.vertices()) || !is_power_of_two(g.degree())) {
    throw ValidationError("walk_from_bits: |V| and d must be powers of two");
  }
  const std::size_t need = walk_seed_bits(g, m);
  if (bits.size() != need) {
    throw ValidationError("walk_from_bits: expected " + std::to_string(need) + " seed bits");
  }
  const std::size_t vb = ceil_log2(g.vertices());
  const std::size_t pb = ceil_log2(g.degree());
  Walk w;
  w.seed_bits = need;
  auto v = static_cast<std::uint32_t>(bits.slice(0, vb).to_index());
  w.vertices.push_back(v);
  for (std::size_t i = 1; i < m; ++i) {
    const std::size_t port = pb == 0 ? 0 : bits.slice(vb + (i - 1) * pb, pb).to_index();
    v = g.neighbor(v, port);
    w.vertices.push_back(v);
  }
  return w;
}

double chernoff_bound(double eps, double lambda, std::size_t m) {
  if (eps < 0 || lambda < 0 || lambda > 1 || m == 0) {
    throw ValidationError("chernoff_bound: need eps >= 0, lambda in [0,1], m >= 1");
  }
  return 2.0 * std::exp(-eps * eps * (1.0 - lambda) * static_cast<double>(m) / 4.0);
}

VertexFunction random_indicator(std::size_t vertices, std::size_t count, std::uint64_t seed) {
  if (count > vertices) throw ValidationError("random_indicator: count exceeds vertex count");
  std::vector<std::size_t> order(vertices);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(order[i], order[i + rng.below(vertices - i)]);
  VertexFunction f;
  f.values.assign(vertices, 0.0);
  for (std::size_t i = 0; i < count; ++i) f.values[order[i]] = 1.0;
  f.mean = static_cast<double>(count) / static_cast<double>(vertices);
  return f;
}

double binomial_std_error(double p, std::size_t trials) {
  if (trials == 0) return 0;
  return std::sqrt(std::max(0.0, p * (1 - p)) / static_cast<double>(trials));
}

DeviationResult empirical_deviation(const ExpanderGraph& g, std::span<const VertexFunction> fs,
                                    double eps, std::size_t trials, std::uint64_t seed) {
  const std::size_t m = fs.size();
  if (m == 0) throw ValidationError("empirical_deviation: no functions");
  double mu = 0;
  for (const auto& f : fs) {
    if (f.values.size() != g.vertices()) {
      throw ValidationError("empirical_deviation: function domain differs from the vertex set");
    }
    double exact = 0;
    for (const double v : f.values) {
      if (v < 0 || v > 1) throw ValidationError("empirical_deviation: values must lie in [0,1]");
      exact += v;
    }
    exact /= static_cast<double>(g.vertices());
    if (std::abs(exact - f.mean) > 1e-9) {
      throw ValidationError("empirical_deviation: declared mean " + std::to_string(f.mean) +
                            " differs from exact mean " + std::to_string(exact));
    }
    mu += f.mean;
  }
  const double threshold = eps * static_cast<double>(m) - 1e-9;

  constexpr std::size_t kShards = 16;
  std::vector<std::size_t> hits(kShards, 0);
  for_each_shard(kShards, [&](std::size_t s) {
    const std::size_t lo = trials * s / kShards;
    const std::size_t hi = trials * (s + 1) / kShards;
    Rng rng(derive_seed(seed, s));
    for (std::size_t t = lo; t < hi; ++t) {
      std::size_t v = rng.below(g.vertices());
      double sum = fs[0].values[v];
      for (std::size_t i = 1; i < m; ++i) {
        v = g.neighbor(v, rng.below(g.degree()));
        sum += fs[i].values[v];
      }
      if (std::abs(sum - mu) >= threshold) ++hits[s];
    }
  });
  DeviationResult r;
  r.trials = trials;
  for (const auto h : hits) r.hits += h;
  if (trials > 0) r.frequency = static_cast<double>(r.hits) / static_cast<double>(trials);
  r.std_error = binomial_std_error(r.frequency, trials);
  return r;
}

std::vector<WireId> margulis_step(CircuitBuilder& b, std::span<const WireId> vertex,
                                  std::span<const WireId> port) {
  if (vertex.size() % 2 != 0 || vertex.empty()) {
    throw ValidationError("margulis_step: vertex needs 2h bits");
  }
  if (port.size() != 3) throw ValidationError("margulis_step: port needs 3 bits");
  const std::size_t h = vertex.size() / 2;
  // Little-endian halves.
  std::vector<WireId> x(h), y(h);
  for (std::size_t i = 0; i < h; ++i) {
    x[i] = vertex[h - 1 - i];
    y[i] = vertex[2 * h - 1 - i];
  }
  auto twice = [&](const std::vector<WireId>& a) {
    std::vector<WireId> out(h);
    out[0] = b.zero();
    for (std::size_t i = 1; i < h; ++i) out[i] = a[i - 1];
    return out;
  };
  auto negate_bits = [&](const std::vector<WireId>& a) {
    std::vector<WireId> out;
    for (const auto w : a) out.push_back(b.not_(w));
    return out;
  };
  const WireId inverse = port[0];  // p >= 4
  const WireId moves_y = port[1];  // p & 2
  const WireId plus_one = port[2]; // p & 1

  // a + 2c + p1, or a - 2c - p1 = a + ~2c + !p1.
  auto shifted = [&](const std::vector<WireId>& a, const std::vector<WireId>& c) {
    const auto two_c = twice(c);
    const auto fwd = b.add_mod(a, two_c, plus_one);
    const auto back = b.add_mod(a, negate_bits(two_c), b.not_(plus_one));
    std::vector<WireId> out(h);
    for (std::size_t i = 0; i < h; ++i) out[i] = b.mux(inverse, fwd[i], back[i]);
    return out;
  };
  const auto x_moved = shifted(x, y);
  const auto y_moved = shifted(y, x);

  std::vector<WireId> out(2 * h);
  for (std::size_t i = 0; i < h; ++i) {
    out[h - 1 - i] = b.mux(moves_y, x_moved[i], x[i]);
    out[2 * h - 1 - i] = b.mux(moves_y, y[i], y_moved[i]);
  }
  return out;
}

}  // namespace amcsp
