#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amcsp/circuit.hpp"
#include "amcsp/csp.hpp"
#include "amcsp/generator.hpp"
#include "amcsp/protocol.hpp"

namespace amcsp {

// Text formats. Every parser reports errors as ParseError with a 1-based
// line number; blank lines and lines starting with '#' are ignored unless
// noted.
//
//   circuit l=<int> N=<int> [name=<token>]
//   g0 = AND r0 w1
//   g1 = NOT g0
//   g2 = CONST1
//   output g1
Circuit parse_circuit(std::string_view text);
std::string write_circuit(const Circuit& c);

//   # meta key=value            (value runs to end of line)
//   # meta fast_path=hub:<k>    (sets the hub tag)
//   csp arthur=<l> merlin=<a0,a1,...> arity=2
//   scope r0 z1 ; table 0110...
Csp parse_csp(std::string_view text);
std::string write_csp(const Csp& csp);

//   language block_len=<int>
//   bitmap <hex>  |  predicate PARITY | MAJORITY | EVERYTHING | EMPTY | RANDOM(<seed>,<density>)
ToyLanguage parse_language(std::string_view text);
std::string write_language(const ToyLanguage& L);

//   protocol-corpus v1
//   <id> <circuit-path> <YES|NO|UNKNOWN> <l> <N>
struct CorpusEntry {
  std::string id;
  std::string circuit_path;
  std::optional<bool> yes;
  std::size_t r_len = 0;
  std::size_t w_len = 0;
};

std::vector<CorpusEntry> parse_corpus(std::string_view text);
std::string write_corpus(const std::vector<CorpusEntry>& entries);
// Loads every circuit, resolving paths relative to the corpus file.
std::vector<AmProtocol> load_corpus(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace amcsp
