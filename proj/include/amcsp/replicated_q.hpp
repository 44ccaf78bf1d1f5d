#pragma once

#include <cstddef>

#include "amcsp/circuit.hpp"
#include "amcsp/codes.hpp"

namespace amcsp {

// C'(r, w || p) = C(r, w) AND p = 0. Extends the witness to `target` bits
// without changing the number of witnesses per r.
Circuit pad_witness(const Circuit& c, std::size_t target);

// The predicate Q(r_1, ..., r_b, u) = 1 iff all r_i are equal, u = E(w) for
// some w, and C(r_1, w) = 1, where b = ceil(N'/l). The circuit has
// b*l + N' inputs (all in its r-block) and no w-block. Membership u in E is
// checked by re-deriving every non-systematic bit from the systematic
// positions, so the code must be systematic and GF(2)-linear.
struct ReplicatedQ {
  Circuit circuit;
  std::size_t blocks = 0;     // b
  std::size_t r_len = 0;      // l
  std::size_t code_bits = 0;  // N'

  std::size_t u_offset() const { return blocks * r_len; }
  // Size bound checked after construction: |C| + 2bl + (generator weight)
  // + N' + 8.
  std::size_t size_budget = 0;
};

std::size_t replication_count(std::size_t r_len, std::size_t code_bits);

ReplicatedQ build_replicated_q(const Circuit& c, const CodeSpec& code);

}  // namespace amcsp
