#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amcsp/bits.hpp"
#include "amcsp/rational.hpp"

namespace amcsp {

using Symbol = std::uint32_t;
using VarId = std::uint32_t;

// A constraint over up to `arity` variables with an explicit truth table in
// row-major order over the scope's alphabet product (last variable fastest).
struct Constraint {
  std::vector<VarId> scope;
  std::vector<std::uint8_t> table;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// An AM-k-CSP psi(r, z). Variables 0..l-1 are the Boolean Arthur-variables;
// variables l.. are Merlin-variables with individual alphabet sizes.
class Csp {
 public:
  Csp() = default;
  Csp(std::size_t arthur, std::vector<Symbol> merlin_alphabets, std::size_t arity = 2);

  std::size_t arthur_count() const { return arthur_; }
  std::size_t merlin_count() const { return merlin_.size(); }
  std::size_t num_vars() const { return arthur_ + merlin_.size(); }
  std::size_t arity() const { return arity_; }
  const std::vector<Symbol>& merlin_alphabets() const { return merlin_; }
  Symbol alphabet(VarId v) const;
  bool is_arthur(VarId v) const { return v < arthur_; }
  VarId merlin_var(std::size_t i) const { return static_cast<VarId>(arthur_ + i); }

  void add_constraint(std::vector<VarId> scope, std::vector<std::uint8_t> table);
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t num_constraints() const { return constraints_.size(); }

  // Fast-path tag: index (among Merlin vars) of the hub variable of a star
  // structure. See max_val_over_z.
  const std::optional<std::size_t>& hub() const { return hub_; }
  void set_hub(std::optional<std::size_t> merlin_index);

  // Ordered key=value annotations (serialized as "# meta" lines).
  std::vector<std::pair<std::string, std::string>>& meta() { return meta_; }
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }
  std::optional<std::string> meta_value(const std::string& key) const;
  void set_meta(const std::string& key, const std::string& value);

  void validate() const;

  friend bool operator==(const Csp&, const Csp&) = default;

 private:
  std::size_t arthur_ = 0;
  std::vector<Symbol> merlin_;
  std::size_t arity_ = 2;
  std::vector<Constraint> constraints_;
  std::optional<std::size_t> hub_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

struct Assignment {
  BitString r;
  std::vector<Symbol> z;
};

std::size_t table_index(const Csp& csp, const Constraint& c, const BitString& r,
                        const std::vector<Symbol>& z);

// Number of satisfied constraints.
std::size_t satisfied_count(const Csp& csp, const Assignment& a);
// Val: satisfied fraction as an exact rational (1 for an empty constraint list).
Rational val(const Csp& csp, const Assignment& a);

struct MaxOptions {
  // Largest Merlin search space (product of alphabet sizes) for brute force.
  std::uint64_t brute_force_limit = std::uint64_t{1} << 20;
  bool allow_fast_path = true;
  bool want_argmax = true;
};

struct MaxResult {
  std::size_t satisfied = 0;
  std::size_t constraints = 0;
  std::vector<Symbol> argmax;  // lexicographically smallest maximizer
  bool fast_path = false;

  Rational value() const;
};

// True when the hub tag is present and every constraint is of one of the
// forms the star solver handles: Arthur-only; hub with at most one Arthur
// variable; hub with at most one leaf; a leaf alone. (A leaf is any Merlin
// variable other than the hub.)
bool star_structure_valid(const Csp& csp);

MaxResult max_val_over_z(const Csp& csp, const BitString& r, const MaxOptions& options = {});

struct GapRecord {
  BitString r;
  std::size_t max_satisfied = 0;
};

struct GapProfile {
  std::size_t arthur = 0;
  std::size_t constraints = 0;
  bool exhaustive = false;
  std::size_t samples = 0;          // records.size()
  std::uint64_t seed = 0;           // sampled mode only
  std::vector<GapRecord> records;   // exhaustive: MSB-first index order

  // Fraction of r with max Val = 1.
  Rational fraction_full() const;
  // Fraction of r with max Val > 1 - eps.
  Rational fraction_above(const Rational& eps) const;
  // Binomial standard error of a sampled fraction (0 when exhaustive).
  double std_error(const Rational& fraction) const;
};

struct ProfileOptions {
  bool exhaustive = true;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t max_exhaustive_bits = 20;
  MaxOptions max;
};

GapProfile gap_profile(const Csp& csp, const ProfileOptions& options = {});

enum class Verdict { Yes, No, Neither };
std::string to_string(Verdict v);

// YES when every recorded r is fully satisfiable, NO when the fraction of r
// with max Val > 1 - eps is at most s, NEITHER otherwise. For sampled
// profiles the verdict is an estimate from the sample.
Verdict classify_promise(const GapProfile& profile, const Rational& eps, const Rational& s);

}  // namespace amcsp
