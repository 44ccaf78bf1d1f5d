#include "amcsp/codes.hpp"

#include <array>

#include "amcsp/error.hpp"

namespace amcsp {

namespace gf256 {

namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};
  Tables() {
    // Primitive polynomial x^8 + x^4 + x^3 + x^2 + 1, generator 2.
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
      log[static_cast<std::size_t>(x)] = i;
      x <<= 1;
      if (x & 0x100) x ^= 0x11d;
    }
    for (int i = 255; i < 512; ++i) exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const auto& t = tables();
  return t.exp[static_cast<std::size_t>(t.log[a] + t.log[b])];
}

std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf256::inv(0)");
  const auto& t = tables();
  return t.exp[static_cast<std::size_t>(255 - t.log[a])];
}

}  // namespace gf256

namespace {

using Poly = std::vector<std::uint8_t>;  // coefficient i multiplies x^i

std::uint8_t poly_eval(const Poly& p, std::uint8_t x) {
  std::uint8_t acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = static_cast<std::uint8_t>(gf256::mul(acc, x) ^ p[i]);
  return acc;
}

// Value at point j of the degree < k polynomial through (i, values[i]), i < k.
std::vector<std::vector<std::uint8_t>> lagrange_matrix(std::size_t k, std::size_t n) {
  std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(k, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (j < k) {
        m[j][i] = (i == j) ? 1 : 0;
        continue;
      }
      std::uint8_t num = 1;
      std::uint8_t den = 1;
      for (std::size_t t = 0; t < k; ++t) {
        if (t == i) continue;
        num = gf256::mul(num, static_cast<std::uint8_t>(j ^ t));
        den = gf256::mul(den, static_cast<std::uint8_t>(i ^ t));
      }
      m[j][i] = gf256::mul(num, gf256::inv(den));
    }
  }
  return m;
}

std::vector<std::uint8_t> to_symbols(const BitString& bits, std::size_t symbols) {
  std::vector<std::uint8_t> out(symbols, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
  }
  return out;
}

BitString from_symbols(const std::vector<std::uint8_t>& symbols, std::size_t bits) {
  BitString out(bits);
  for (std::size_t i = 0; i < bits; ++i) out.set(i, (symbols[i / 8] >> (i % 8)) & 1U);
  return out;
}

std::vector<std::uint8_t> rs_encode_symbols(const CodeSpec& spec, const std::vector<std::uint8_t>& msg) {
  static thread_local std::size_t cached_k = 0, cached_n = 0;
  static thread_local std::vector<std::vector<std::uint8_t>> cached;
  if (cached_k != spec.rs_k || cached_n != spec.rs_n) {
    cached = lagrange_matrix(spec.rs_k, spec.rs_n);
    cached_k = spec.rs_k;
    cached_n = spec.rs_n;
  }
  std::vector<std::uint8_t> out(spec.rs_n, 0);
  for (std::size_t j = 0; j < spec.rs_n; ++j) {
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < spec.rs_k; ++i) acc ^= gf256::mul(cached[j][i], msg[i]);
    out[j] = acc;
  }
  return out;
}

// Solves A x = b over GF(256) by Gauss-Jordan elimination; free variables
// are set to zero. Returns nullopt when inconsistent.
std::optional<std::vector<std::uint8_t>> solve(std::vector<std::vector<std::uint8_t>> a,
                                               std::size_t unknowns) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < unknowns && row < rows; ++col) {
    std::size_t p = row;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    const std::uint8_t scale = gf256::inv(a[row][col]);
    for (auto& v : a[row]) v = gf256::mul(v, scale);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const std::uint8_t f = a[r][col];
      for (std::size_t c = col; c <= unknowns; ++c) a[r][c] ^= gf256::mul(f, a[row][c]);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < rows; ++r) {
    if (a[r][unknowns] != 0) return std::nullopt;
  }
  std::vector<std::uint8_t> x(unknowns, 0);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = a[r][unknowns];
  return x;
}

// Berlekamp-Welch: find E (monic, degree e) and Q (degree < e + k) with
// Q(a_i) = y_i E(a_i), then P = Q / E.
std::optional<std::vector<std::uint8_t>> berlekamp_welch(const std::vector<std::uint8_t>& y,
                                                        std::size_t k, std::size_t e) {
  const std::size_t n = y.size();
  const std::size_t nq = e + k;
  const std::size_t unknowns = nq + e;
  std::vector<std::vector<std::uint8_t>> a(n, std::vector<std::uint8_t>(unknowns + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto alpha = static_cast<std::uint8_t>(i);
    std::uint8_t pw = 1;
    for (std::size_t j = 0; j < std::max(nq, e + 1); ++j) {
      if (j < nq) a[i][j] = pw;
      if (j < e) a[i][nq + j] = gf256::mul(y[i], pw);
      if (j == e) a[i][unknowns] = gf256::mul(y[i], pw);
      pw = gf256::mul(pw, alpha);
    }
  }
  auto sol = solve(std::move(a), unknowns);
  if (!sol) return std::nullopt;
  Poly q(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(nq));
  Poly err(sol->begin() + static_cast<std::ptrdiff_t>(nq), sol->end());
  err.push_back(1);
  // Long division q / err; err is monic.
  Poly rem = q;
  Poly quot(nq >= e ? nq - e : 1, 0);
  for (std::size_t d = nq; d-- > e;) {
    const std::uint8_t coef = rem[d];
    if (coef == 0) continue;
    quot[d - e] = coef;
    for (std::size_t t = 0; t <= e; ++t) rem[d - e + t] ^= gf256::mul(coef, err[t]);
  }
  for (std::size_t t = 0; t < e && t < rem.size(); ++t) {
    if (rem[t] != 0) return std::nullopt;
  }
  for (std::size_t d = k; d < quot.size(); ++d) {
    if (quot[d] != 0) return std::nullopt;
  }
  quot.resize(k, 0);
  std::vector<std::uint8_t> corrected(n);
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < n; ++i) {
    corrected[i] = poly_eval(quot, static_cast<std::uint8_t>(i));
    disagreements += corrected[i] != y[i];
  }
  if (disagreements > e) return std::nullopt;
  return corrected;
}

void check_length(const BitString& bits, std::size_t expected, const char* what) {
  if (bits.size() != expected) {
    throw ValidationError(std::string(what) + ": expected length " + std::to_string(expected) +
                          ", got " + std::to_string(bits.size()));
  }
}

}  // namespace

std::size_t CodeSpec::radius() const {
  return floor_of(eta * Rational(codeword_bits)).convert_to<std::size_t>();
}

std::string CodeSpec::id() const {
  return backend + "(N=" + std::to_string(message_bits) + ",N'=" + std::to_string(codeword_bits) + ")";
}

CodeSpec build_default_code(std::size_t message_bits) {
  if (message_bits == 0) throw ValidationError("build_default_code: N must be positive");
  CodeSpec spec;
  spec.backend = "rs";
  spec.message_bits = message_bits;
  spec.rs_k = (message_bits + 7) / 8;
  spec.rs_n = 8 * spec.rs_k;
  if (spec.rs_n > 256) throw LimitError("build_default_code: N above 256 bits is not supported");
  spec.codeword_bits = 8 * spec.rs_n;
  const std::size_t e = (spec.rs_n - spec.rs_k) / 2;
  spec.eta = Rational(BigInt(e), BigInt(spec.codeword_bits));
  spec.min_distance = spec.rs_n - spec.rs_k + 1;
  return spec;
}

CodeSpec build_repetition_code(std::size_t message_bits, std::size_t copies) {
  if (message_bits == 0 || copies == 0) throw ValidationError("build_repetition_code: empty code");
  CodeSpec spec;
  spec.backend = "rep" + std::to_string(copies);
  spec.message_bits = message_bits;
  spec.codeword_bits = message_bits * copies;
  spec.eta = Rational(BigInt((copies - 1) / 2), BigInt(spec.codeword_bits));
  spec.min_distance = copies;
  return spec;
}

CodeSpec build_identity_code(std::size_t message_bits) {
  if (message_bits == 0) throw ValidationError("build_identity_code: empty code");
  CodeSpec spec;
  spec.backend = "identity";
  spec.message_bits = message_bits;
  spec.codeword_bits = message_bits;
  spec.eta = 0;
  spec.min_distance = 1;
  return spec;
}

CodeSpec build_code(const std::string& backend, std::size_t message_bits) {
  if (backend == "rs") return build_default_code(message_bits);
  if (backend == "rep5") return build_repetition_code(message_bits, 5);
  if (backend == "identity") return build_identity_code(message_bits);
  throw ValidationError("unknown code backend '" + backend + "'");
}

BitString encode(const CodeSpec& spec, const BitString& message) {
  check_length(message, spec.message_bits, "encode");
  if (spec.backend == "rs") {
    return from_symbols(rs_encode_symbols(spec, to_symbols(message, spec.rs_k)), spec.codeword_bits);
  }
  if (spec.backend == "identity") return message;
  if (spec.backend.rfind("rep", 0) == 0) {
    BitString out;
    for (std::size_t c = 0; c < spec.codeword_bits / spec.message_bits; ++c) out.append(message);
    return out;
  }
  throw ValidationError("unknown code backend '" + spec.backend + "'");
}

std::optional<BitString> decode(const CodeSpec& spec, const BitString& word) {
  check_length(word, spec.codeword_bits, "decode");
  if (spec.backend == "rs") {
    const std::size_t e = (spec.rs_n - spec.rs_k) / 2;
    auto corrected = berlekamp_welch(to_symbols(word, spec.rs_n), spec.rs_k, e);
    if (!corrected) return std::nullopt;
    corrected->resize(spec.rs_k);
    // Padding bits of the last message symbol must be zero for a codeword
    // in the image of E.
    for (std::size_t i = spec.message_bits; i < 8 * spec.rs_k; ++i) {
      if (((*corrected)[i / 8] >> (i % 8)) & 1U) return std::nullopt;
    }
    return from_symbols(*corrected, spec.message_bits);
  }
  if (spec.backend == "identity") return word;
  if (spec.backend.rfind("rep", 0) == 0) {
    const std::size_t copies = spec.codeword_bits / spec.message_bits;
    BitString out(spec.message_bits);
    for (std::size_t i = 0; i < spec.message_bits; ++i) {
      std::size_t ones = 0;
      for (std::size_t c = 0; c < copies; ++c) ones += word[c * spec.message_bits + i];
      out.set(i, 2 * ones > copies);
    }
    return out;
  }
  throw ValidationError("unknown code backend '" + spec.backend + "'");
}

std::vector<std::size_t> systematic_positions(const CodeSpec& spec) {
  if (!spec.systematic) throw ValidationError("code is not systematic");
  std::vector<std::size_t> pos(spec.message_bits);
  for (std::size_t i = 0; i < spec.message_bits; ++i) pos[i] = i;
  return pos;
}

std::vector<std::vector<std::size_t>> linear_generator(const CodeSpec& spec) {
  if (!spec.linear) throw ValidationError("code is not linear");
  std::vector<std::vector<std::size_t>> rows(spec.codeword_bits);
  for (std::size_t i = 0; i < spec.message_bits; ++i) {
    BitString unit(spec.message_bits);
    unit.set(i, true);
    const BitString col = encode(spec, unit);
    for (std::size_t j = 0; j < spec.codeword_bits; ++j) {
      if (col[j]) rows[j].push_back(i);
    }
  }
  return rows;
}

}  // namespace amcsp
