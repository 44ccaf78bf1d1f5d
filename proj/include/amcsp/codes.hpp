#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amcsp/bits.hpp"
#include "amcsp/rational.hpp"

namespace amcsp {

// Registered code families.
//   "rs"       systematic Reed-Solomon over GF(2^8), 8 bits per symbol (default)
//   "rep5"     block repetition x5 (interface tests only)
//   "identity" E(w) = w, radius 0 (structural tests of Q only)
struct CodeSpec {
  std::string backend;
  std::size_t message_bits = 0;    // N
  std::size_t codeword_bits = 0;   // N'
  Rational eta;                    // decoding radius as a fraction of N'
  std::size_t min_distance = 0;    // certified, in bits
  bool systematic = true;
  bool linear = true;
  std::size_t rs_k = 0;            // RS message symbols
  std::size_t rs_n = 0;            // RS codeword symbols

  // floor(eta * N'): the number of bit errors decode is guaranteed to fix.
  std::size_t radius() const;
  std::string id() const;
};

// Bound on N'/N for the default code: N' = 64 * ceil(N/8) <= 64 N.
inline constexpr std::size_t kDefaultCodeRateBound = 64;

CodeSpec build_default_code(std::size_t message_bits);
CodeSpec build_repetition_code(std::size_t message_bits, std::size_t copies = 5);
CodeSpec build_identity_code(std::size_t message_bits);
CodeSpec build_code(const std::string& backend, std::size_t message_bits);

BitString encode(const CodeSpec& spec, const BitString& message);

// Returns the unique message whose codeword is within radius() of u, and
// nullopt (FAIL) when the decoder finds no consistent codeword. Outside the
// radius the result carries no guarantee.
std::optional<BitString> decode(const CodeSpec& spec, const BitString& word);

// Codeword positions holding the message bits verbatim, in message order.
std::vector<std::size_t> systematic_positions(const CodeSpec& spec);

// For a GF(2)-linear code: row j lists the message bits whose XOR is
// codeword bit j.
std::vector<std::vector<std::size_t>> linear_generator(const CodeSpec& spec);

namespace gf256 {
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);
}  // namespace gf256

}  // namespace amcsp
