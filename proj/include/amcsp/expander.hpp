#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amcsp/bits.hpp"
#include "amcsp/circuit.hpp"

namespace amcsp {

// A d-regular multigraph given by its rotation table: neighbor(v, p) for
// every vertex v and port p < d.
class ExpanderGraph {
 public:
  ExpanderGraph() = default;
  ExpanderGraph(std::string family, std::size_t vertices, std::size_t degree,
                std::vector<std::uint32_t> table);

  const std::string& family() const { return family_; }
  std::size_t vertices() const { return vertices_; }
  std::size_t degree() const { return degree_; }
  std::uint32_t neighbor(std::size_t v, std::size_t port) const {
    return table_[v * degree_ + port];
  }
  const std::vector<std::uint32_t>& table() const { return table_; }

  // Side length m for Margulis graphs on Z_m x Z_m, else 0.
  std::size_t side() const { return side_; }
  void set_side(std::size_t m) { side_ = m; }

  // Cached measured lambda.
  const std::optional<double>& lambda() const { return lambda_; }
  double measure_lambda();

  // True when the adjacency multiset is symmetric (undirected).
  bool symmetric() const;

 private:
  std::string family_;
  std::size_t vertices_ = 0;
  std::size_t degree_ = 0;
  std::size_t side_ = 0;
  std::vector<std::uint32_t> table_;
  std::optional<double> lambda_;
};

// Margulis-Gabber-Galil on Z_m x Z_m, vertex (x, y) = x*m + y. Ports 0..3:
// (x+2y, y), (x+2y+1, y), (x, y+2x), (x, y+2x+1); port p+4 inverts port p.
ExpanderGraph build_margulis(std::size_t m);
// K_n as an (n-1)-regular graph, or n-regular with one self-loop each.
ExpanderGraph build_complete(std::size_t n, bool self_loops = false);
ExpanderGraph build_cycle(std::size_t n);
ExpanderGraph disjoint_union(const ExpanderGraph& a, const ExpanderGraph& b);

inline constexpr std::size_t kSpectralLimit = std::size_t{1} << 14;

// Second-largest absolute eigenvalue of the transition matrix, by power
// iteration on its square restricted to the complement of the constant
// vector. Requires a symmetric graph.
double second_eigenvalue(const ExpanderGraph& g, std::size_t limit = kSpectralLimit);

struct Walk {
  std::vector<std::uint32_t> vertices;
  std::uint64_t seed = 0;
  std::size_t seed_bits = 0;
};

// ceil(log2 |V|) + (m - 1) * ceil(log2 d)
std::size_t walk_seed_bits(const ExpanderGraph& g, std::size_t m);
Walk sample_walk(const ExpanderGraph& g, std::size_t m, std::uint64_t seed);
// Start vertex from the first log2|V| bits (MSB-first), then log2 d bits per
// port. |V| and d must be powers of two.
Walk walk_from_bits(const ExpanderGraph& g, std::size_t m, const BitString& bits);

double chernoff_bound(double eps, double lambda, std::size_t m);

// A [0,1]-valued function on the vertices with its declared mean.
struct VertexFunction {
  std::vector<double> values;
  double mean = 0;
};

// Indicator of `count` vertices chosen uniformly without replacement.
VertexFunction random_indicator(std::size_t vertices, std::size_t count, std::uint64_t seed);

struct DeviationResult {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double frequency = 0;
  double std_error = 0;
};

double binomial_std_error(double p, std::size_t trials);

// Fraction of walks with |sum f_i(v_i) - sum mu_i| >= eps * m, m = fs.size().
DeviationResult empirical_deviation(const ExpanderGraph& g, std::span<const VertexFunction> fs,
                                    double eps, std::size_t trials, std::uint64_t seed);

// In-circuit Margulis step for m = 2^h. Vertex and port are MSB-first
// (vertex = x || y); returns the neighbor's bits.
std::vector<WireId> margulis_step(CircuitBuilder& b, std::span<const WireId> vertex,
                                  std::span<const WireId> port);

}  // namespace amcsp
