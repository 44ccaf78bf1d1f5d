#include "amcsp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "amcsp/error.hpp"
#include "amcsp/parallel.hpp"
#include "amcsp/rng.hpp"

namespace amcsp {

std::string to_string(OffsetFamily f) {
  switch (f) {
    case OffsetFamily::Zero: return "zero";
    case OffsetFamily::Rotation: return "rotation";
    case OffsetFamily::Affine: return "affine";
  }
  return "?";
}

OffsetFamily parse_offset_family(const std::string& name) {
  if (name == "zero") return OffsetFamily::Zero;
  if (name == "rotation") return OffsetFamily::Rotation;
  if (name == "affine") return OffsetFamily::Affine;
  throw ValidationError("unknown offset family '" + name + "'");
}

std::size_t GeneratorSpec::walk_bits() const { return walk_seed_bits(graph, k); }

std::size_t GeneratorSpec::index_bits() const {
  std::size_t q = 1;
  while ((std::size_t{1} << q) < k) ++q;
  return q;
}

std::size_t GeneratorSpec::offset_bits() const {
  switch (offsets) {
    case OffsetFamily::Zero: return 0;
    case OffsetFamily::Rotation: return block_len;
    case OffsetFamily::Affine: return block_len * index_bits() + block_len;
  }
  return 0;
}

GeneratorSpec make_generator(std::size_t block_len, std::size_t k, OffsetFamily offsets) {
  if (block_len == 0 || block_len % 2 != 0) {
    throw ValidationError("generator: block_len must be positive and even");
  }
  if (block_len > 30) throw LimitError("generator: block_len above 30");
  if (k == 0) throw ValidationError("generator: k must be positive");
  GeneratorSpec spec;
  spec.block_len = block_len;
  spec.k = k;
  spec.graph = build_margulis(std::size_t{1} << (block_len / 2));
  spec.offsets = offsets;
  return spec;
}

std::vector<BitString> walk_blocks(const GeneratorSpec& spec, const BitString& r_a) {
  const Walk w = walk_from_bits(spec.graph, spec.k, r_a);
  std::vector<BitString> out;
  out.reserve(spec.k);
  for (const auto v : w.vertices) out.push_back(BitString::from_index(v, spec.block_len));
  return out;
}

std::vector<BitString> offset_blocks(const GeneratorSpec& spec, const BitString& r_b) {
  if (r_b.size() != spec.offset_bits()) {
    throw ValidationError("offset_blocks: expected " + std::to_string(spec.offset_bits()) + " bits");
  }
  const std::size_t bl = spec.block_len;
  std::vector<BitString> out(spec.k, BitString(bl, false));
  for (std::size_t i = 0; i < spec.k; ++i) {
    switch (spec.offsets) {
      case OffsetFamily::Zero: break;
      case OffsetFamily::Rotation:
        for (std::size_t j = 0; j < bl; ++j) out[i].set(j, r_b[(j + i) % bl]);
        break;
      case OffsetFamily::Affine: {
        const std::size_t q = spec.index_bits();
        for (std::size_t j = 0; j < bl; ++j) {
          bool bit = r_b[bl * q + j];
          for (std::size_t t = 0; t < q; ++t) {
            if ((i >> t) & 1) bit ^= r_b[j * q + t] != 0;
          }
          out[i].set(j, bit);
        }
        break;
      }
    }
  }
  return out;
}

std::vector<BitString> g_iw(const GeneratorSpec& spec, const BitString& r) {
  if (r.size() != spec.seed_bits()) {
    throw ValidationError("g_iw: expected a " + std::to_string(spec.seed_bits()) + "-bit seed, got " +
                          std::to_string(r.size()));
  }
  auto blocks = walk_blocks(spec, r.slice(0, spec.walk_bits()));
  const auto off = offset_blocks(spec, r.slice(spec.walk_bits(), spec.offset_bits()));
  for (std::size_t i = 0; i < spec.k; ++i) blocks[i] ^= off[i];
  return blocks;
}

bool ToyLanguage::contains(const BitString& x) const {
  if (x.size() != block_len) throw ValidationError("language: input length mismatch");
  return member[x.to_index()] != 0;
}

std::size_t ToyLanguage::members() const {
  return static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
}

Rational ToyLanguage::density() const {
  return Rational(BigInt(members()), BigInt(member.size()));
}

namespace {

ToyLanguage blank(std::size_t block_len, std::string description) {
  if (block_len == 0 || block_len > 24) throw ValidationError("language: block_len must be in [1, 24]");
  ToyLanguage L;
  L.block_len = block_len;
  L.member.assign(std::size_t{1} << block_len, 0);
  L.description = std::move(description);
  return L;
}

}  // namespace

ToyLanguage language_everything(std::size_t block_len) {
  auto L = blank(block_len, "EVERYTHING");
  std::fill(L.member.begin(), L.member.end(), 1);
  return L;
}

ToyLanguage language_empty(std::size_t block_len) { return blank(block_len, "EMPTY"); }

ToyLanguage language_parity(std::size_t block_len) {
  auto L = blank(block_len, "PARITY");
  for (std::size_t i = 0; i < L.member.size(); ++i) L.member[i] = __builtin_popcountll(i) & 1;
  return L;
}

ToyLanguage language_majority(std::size_t block_len) {
  auto L = blank(block_len, "MAJORITY");
  for (std::size_t i = 0; i < L.member.size(); ++i) {
    L.member[i] = 2 * static_cast<std::size_t>(__builtin_popcountll(i)) > block_len;
  }
  return L;
}

ToyLanguage language_random(std::size_t block_len, std::uint64_t seed, const Rational& density) {
  if (density < 0 || density > 1) throw ValidationError("language: density must lie in [0, 1]");
  auto L = blank(block_len, "RANDOM(" + std::to_string(seed) + "," + to_string(density) + ")");
  const std::size_t n = L.member.size();
  const Rational scaled = density * n + Rational(1, 2);
  const auto count = static_cast<std::size_t>(floor_of(scaled));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
    L.member[order[i]] = 1;
  }
  return L;
}

ToyLanguage language_bitmap(std::size_t block_len, const std::string& hex) {
  auto L = blank(block_len, "BITMAP");
  const std::size_t n = L.member.size();
  const std::size_t digits = (n + 3) / 4;
  if (hex.size() != digits) {
    throw ValidationError("bitmap: expected " + std::to_string(digits) + " hex digits, got " +
                          std::to_string(hex.size()));
  }
  for (std::size_t d = 0; d < digits; ++d) {
    const char c = hex[d];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ValidationError(std::string("bitmap: invalid hex digit '") + c + "'");
    for (int b = 0; b < 4; ++b) {
      const std::size_t i = d * 4 + static_cast<std::size_t>(b);
      const bool bit = (v >> (3 - b)) & 1;
      if (i < n) L.member[i] = bit;
      else if (bit) throw ValidationError("bitmap: padding bits must be zero");
    }
  }
  return L;
}

std::string bitmap_hex(const ToyLanguage& L) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  const std::size_t n = L.member.size();
  for (std::size_t d = 0; d < (n + 3) / 4; ++d) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t i = d * 4 + b;
      v = v * 2 + (i < n ? L.member[i] : 0);
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

namespace {

bool echoes(const ToyLanguage& L, const BitString& x, const BitString& w) {
  if (w.size() != L.witness_bits()) throw ValidationError("witness length mismatch");
  for (std::size_t j = 0; j < L.block_len; ++j) {
    if (w[j + 1] != x[j]) return false;
  }
  return true;
}

}  // namespace

bool total_witness_accepts(const ToyLanguage& L, const BitString& x, const BitString& w) {
  return echoes(L, x, w) && (w[0] != 0) == L.contains(x);
}

bool np_witness_accepts(const ToyLanguage& L, const BitString& x, const BitString& w) {
  return echoes(L, x, w) && w[0] != 0 && L.contains(x);
}

BitString honest_witness(const ToyLanguage& L, const BitString& x) {
  BitString w;
  w.push_back(L.contains(x));
  w.append(x);
  return w;
}

BitString l_compose(const ToyLanguage& L, const GeneratorSpec& spec, const BitString& r) {
  if (L.block_len != spec.block_len) throw ValidationError("language and generator block lengths differ");
  BitString out;
  for (const auto& b : g_iw(spec, r)) out.push_back(L.contains(b));
  return out;
}

std::size_t sharp(const ToyLanguage& L, const GeneratorSpec& spec, const BitString& r) {
  return l_compose(L, spec, r).weight();
}

std::size_t sharp_C(const ToyLanguage& L, const GeneratorSpec& spec, const BitString& r,
                    const std::vector<BitString>& witnesses) {
  if (witnesses.size() != spec.k) throw ValidationError("sharp_C: need one witness per block");
  const auto blocks = g_iw(spec, r);
  std::size_t n = 0;
  for (std::size_t i = 0; i < spec.k; ++i) n += np_witness_accepts(L, blocks[i], witnesses[i]);
  return n;
}

ConcentrationResult concentration_experiment(const ToyLanguage& L, const GeneratorSpec& spec,
                                             double delta, std::size_t trials, std::uint64_t seed,
                                             std::size_t rb_samples) {
  if (trials == 0) throw ValidationError("concentration_experiment: trials must be positive");
  if (L.block_len != spec.block_len) throw ValidationError("language and generator block lengths differ");
  ConcentrationResult res;
  res.lambda = second_eigenvalue(spec.graph);
  res.bound = chernoff_bound(delta, res.lambda, spec.k);
  const double center = to_double(L.density()) * static_cast<double>(spec.k);
  const double threshold = delta * static_cast<double>(spec.k) - 1e-9;
  const std::size_t vertices = spec.graph.vertices();
  const std::size_t degree = spec.graph.degree();

  constexpr std::size_t kShards = 16;
  std::vector<std::size_t> hits(kShards, 0);
  for_each_shard(kShards, [&](std::size_t s) {
    const std::size_t lo = trials * s / kShards;
    const std::size_t hi = trials * (s + 1) / kShards;
    Rng rng(derive_seed(seed, s));
    BitString r_b(spec.offset_bits(), false);
    for (std::size_t t = lo; t < hi; ++t) {
      std::size_t v = rng.below(vertices);
      std::vector<std::size_t> walk{v};
      for (std::size_t i = 1; i < spec.k; ++i) {
        v = spec.graph.neighbor(v, rng.below(degree));
        walk.push_back(v);
      }
      for (std::size_t j = 0; j < r_b.size(); ++j) r_b.set(j, rng.bit());
      const auto off = offset_blocks(spec, r_b);
      std::size_t count = 0;
      for (std::size_t i = 0; i < spec.k; ++i) {
        count += L.member[walk[i] ^ off[i].to_index()];
      }
      if (std::abs(static_cast<double>(count) - center) >= threshold) ++hits[s];
    }
  });
  res.overall.trials = trials;
  for (const auto h : hits) res.overall.hits += h;
  res.overall.frequency = static_cast<double>(res.overall.hits) / static_cast<double>(trials);
  res.overall.std_error = binomial_std_error(res.overall.frequency, trials);

  // Conditioned on r_b, block i is in L iff the walk vertex lies in L + v'_i,
  // a set of the same density.
  Rng pick(derive_seed(seed, 1000));
  for (std::size_t s = 0; s < rb_samples; ++s) {
    ConditionalCheck check;
    check.r_b = BitString(spec.offset_bits(), false);
    for (std::size_t j = 0; j < check.r_b.size(); ++j) check.r_b.set(j, pick.bit());
    const auto off = offset_blocks(spec, check.r_b);
    std::vector<VertexFunction> fs(spec.k);
    for (std::size_t i = 0; i < spec.k; ++i) {
      const std::size_t shift = off[i].to_index();
      fs[i].values.resize(vertices);
      for (std::size_t v = 0; v < vertices; ++v) fs[i].values[v] = L.member[v ^ shift];
      fs[i].mean = to_double(L.density());
    }
    check.deviation = empirical_deviation(spec.graph, fs, delta, trials, derive_seed(seed, 2000 + s));
    res.conditional.push_back(std::move(check));
  }
  return res;
}

namespace {

// Wires of generator block i (MSB-first) for a seed held in r-wires.
std::vector<std::vector<WireId>> generator_blocks(CircuitBuilder& b, const GeneratorSpec& spec) {
  Circuit& c = b.circuit();
  const std::size_t bl = spec.block_len;
  std::vector<WireId> vertex;
  for (std::size_t j = 0; j < bl; ++j) vertex.push_back(c.r(j));
  std::vector<std::vector<WireId>> walk{vertex};
  for (std::size_t i = 1; i < spec.k; ++i) {
    const std::size_t at = bl + (i - 1) * 3;
    const std::vector<WireId> port{c.r(at), c.r(at + 1), c.r(at + 2)};
    vertex = margulis_step(b, vertex, port);
    walk.push_back(vertex);
  }
  const std::size_t off = spec.walk_bits();
  for (std::size_t i = 0; i < spec.k; ++i) {
    for (std::size_t j = 0; j < bl; ++j) {
      switch (spec.offsets) {
        case OffsetFamily::Zero: break;
        case OffsetFamily::Rotation:
          walk[i][j] = b.xor_(walk[i][j], c.r(off + (j + i) % bl));
          break;
        case OffsetFamily::Affine: {
          const std::size_t q = spec.index_bits();
          std::vector<WireId> terms{walk[i][j], c.r(off + bl * q + j)};
          for (std::size_t t = 0; t < q; ++t) {
            if ((i >> t) & 1) terms.push_back(c.r(off + j * q + t));
          }
          walk[i][j] = b.xor_all(terms);
          break;
        }
      }
    }
  }
  return walk;
}

// Per-block acceptance wires; total selects the total relation, else NP.
std::vector<WireId> block_checks(CircuitBuilder& b, const ToyLanguage& L, const GeneratorSpec& spec,
                                 bool total) {
  if (!L.has_witnesses) throw ValidationError("language carries no witness relation");
  if (L.block_len != spec.block_len) throw ValidationError("language and generator block lengths differ");
  Circuit& c = b.circuit();
  const auto blocks = generator_blocks(b, spec);
  const std::size_t wb = L.witness_bits();
  std::vector<WireId> accept;
  for (std::size_t i = 0; i < spec.k; ++i) {
    const WireId claim = c.w(i * wb);
    std::vector<WireId> echo;
    for (std::size_t j = 0; j < spec.block_len; ++j) echo.push_back(c.w(i * wb + 1 + j));
    const WireId same = b.equal(echo, blocks[i]);
    const WireId in_l = b.lookup(blocks[i], L.member);
    const WireId claim_ok = total ? b.xnor(claim, in_l) : b.and_(claim, in_l);
    accept.push_back(b.and_(same, claim_ok));
  }
  return accept;
}

}  // namespace

Circuit build_Q_conp(const ToyLanguage& L, const GeneratorSpec& spec) {
  Circuit c(spec.seed_bits(), spec.k * L.witness_bits(), "Q-conp[" + L.description + "]");
  CircuitBuilder b(c);
  const auto accept = block_checks(b, L, spec, true);
  c.set_output(b.and_all(accept));
  return c;
}

Circuit build_Q_threshold(const ToyLanguage& L, const GeneratorSpec& spec, const Rational& eta) {
  if (eta <= 0 || eta >= 1) throw ValidationError("build_Q_threshold: eta must lie in (0, 1)");
  Circuit c(spec.seed_bits(), spec.k * L.witness_bits(),
            "Q-threshold[" + L.description + "," + to_string(eta) + "]");
  CircuitBuilder b(c);
  const auto accept = block_checks(b, L, spec, false);
  const auto count = b.popcount(accept);
  const auto threshold = ceil_of(eta * spec.k).convert_to<std::uint64_t>();
  c.set_output(b.at_least(count, threshold));
  return c;
}

BitString claim_bits_extract(const ToyLanguage& L, std::size_t k, const BitString& witnesses) {
  const std::size_t wb = L.witness_bits();
  if (witnesses.size() != k * wb) throw ValidationError("claim_bits_extract: tuple length mismatch");
  BitString out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(witnesses[i * wb]);
  return out;
}

namespace {

std::size_t guess_radius(std::size_t k, const Rational& alpha) {
  if (alpha <= 0) throw ValidationError("guess_with_subset: alpha must be positive");
  const BigInt c = ceil_of(alpha * k);
  const auto r = c.convert_to<std::size_t>();
  return std::min(k, r == 0 ? 0 : r - 1);
}

}  // namespace

SubsetGuesser::SubsetGuesser(std::size_t k, const Rational& alpha, std::uint64_t seed)
    : k_(k), ball_(k, guess_radius(k, alpha), seed) {}

BitString SubsetGuesser::guess(const BitString& accepted) {
  if (accepted.size() != k_) throw ValidationError("guess_with_subset: I has the wrong length");
  BitString out = ball_.sample();
  for (std::size_t i = 0; i < k_; ++i) {
    if (accepted[i]) out.set(i, true);
  }
  return out;
}

BitString guess_with_subset(const BitString& accepted, std::size_t k, const Rational& alpha,
                            std::uint64_t seed) {
  SubsetGuesser g(k, alpha, seed);
  return g.guess(accepted);
}

Rational guess_success_exact(const BitString& accepted, const BitString& target,
                             const Rational& alpha) {
  const std::size_t k = accepted.size();
  if (target.size() != k) throw ValidationError("guess_success_exact: length mismatch");
  const std::size_t radius = guess_radius(k, alpha);
  std::size_t missing = 0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (accepted[i] && !target[i]) return 0;
    if (target[i] && !accepted[i]) ++missing;
    if (accepted[i]) ++inside;
  }
  if (missing > radius) return 0;
  // J = (target \ I) plus any e elements of I, |J| <= radius.
  BigInt good = 0;
  for (std::size_t e = 0; e <= inside && missing + e <= radius; ++e) good += binomial(inside, e);
  return Rational(good, sphere_volume(k, radius));
}

}  // namespace amcsp
