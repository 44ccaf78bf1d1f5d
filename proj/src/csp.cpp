#include "amcsp/csp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amcsp/error.hpp"
#include "amcsp/parallel.hpp"
#include "amcsp/rng.hpp"

namespace amcsp {

Csp::Csp(std::size_t arthur, std::vector<Symbol> merlin_alphabets, std::size_t arity)
    : arthur_(arthur), merlin_(std::move(merlin_alphabets)), arity_(arity) {
  for (Symbol s : merlin_) {
    if (s == 0) throw ValidationError("Csp: Merlin alphabet size must be positive");
  }
  if (arity_ == 0) throw ValidationError("Csp: arity must be positive");
}

Symbol Csp::alphabet(VarId v) const {
  if (v < arthur_) return 2;
  if (v - arthur_ < merlin_.size()) return merlin_[v - arthur_];
  throw ValidationError("Csp: unknown variable " + std::to_string(v));
}

void Csp::add_constraint(std::vector<VarId> scope, std::vector<std::uint8_t> table) {
  if (scope.size() > arity_) {
    throw ValidationError("Csp: scope of size " + std::to_string(scope.size()) +
                          " exceeds arity " + std::to_string(arity_));
  }
  std::size_t expected = 1;
  for (VarId v : scope) expected *= alphabet(v);
  if (table.size() != expected) {
    throw ValidationError("Csp: truth table has " + std::to_string(table.size()) +
                          " entries, expected " + std::to_string(expected));
  }
  for (auto t : table) {
    if (t > 1) throw ValidationError("Csp: truth table entries must be 0 or 1");
  }
  constraints_.push_back(Constraint{std::move(scope), std::move(table)});
}

void Csp::set_hub(std::optional<std::size_t> merlin_index) {
  if (merlin_index && *merlin_index >= merlin_.size()) {
    throw ValidationError("Csp: hub index out of range");
  }
  hub_ = merlin_index;
}

std::optional<std::string> Csp::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Csp::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

void Csp::validate() const {
  for (const auto& c : constraints_) {
    if (c.scope.size() > arity_) throw ValidationError("Csp: scope exceeds arity");
    std::size_t expected = 1;
    for (VarId v : c.scope) expected *= alphabet(v);
    if (c.table.size() != expected) throw ValidationError("Csp: truth table size mismatch");
  }
  if (hub_ && *hub_ >= merlin_.size()) throw ValidationError("Csp: hub index out of range");
}

namespace {

void check_shape(const Csp& csp, const Assignment& a) {
  if (a.r.size() != csp.arthur_count() || a.z.size() != csp.merlin_count()) {
    throw ValidationError("assignment shape does not match the CSP");
  }
  for (std::size_t i = 0; i < a.z.size(); ++i) {
    if (a.z[i] >= csp.merlin_alphabets()[i]) {
      throw ValidationError("assignment symbol out of range for Merlin variable " + std::to_string(i));
    }
  }
}

Symbol value_of(const Csp& csp, VarId v, const BitString& r, const std::vector<Symbol>& z) {
  return csp.is_arthur(v) ? r[v] : z[v - csp.arthur_count()];
}

}  // namespace

std::size_t table_index(const Csp& csp, const Constraint& c, const BitString& r,
                        const std::vector<Symbol>& z) {
  std::size_t idx = 0;
  for (VarId v : c.scope) idx = idx * csp.alphabet(v) + value_of(csp, v, r, z);
  return idx;
}

std::size_t satisfied_count(const Csp& csp, const Assignment& a) {
  check_shape(csp, a);
  std::size_t sat = 0;
  for (const auto& c : csp.constraints()) sat += c.table[table_index(csp, c, a.r, a.z)];
  return sat;
}

Rational val(const Csp& csp, const Assignment& a) {
  const std::size_t sat = satisfied_count(csp, a);
  if (csp.num_constraints() == 0) return 1;
  return Rational(BigInt(sat), BigInt(csp.num_constraints()));
}

Rational MaxResult::value() const {
  if (constraints == 0) return 1;
  return Rational(BigInt(satisfied), BigInt(constraints));
}

bool star_structure_valid(const Csp& csp) {
  if (!csp.hub()) return false;
  const VarId hub = csp.merlin_var(*csp.hub());
  for (const auto& c : csp.constraints()) {
    std::size_t arthur = 0;
    bool has_hub = false;
    std::optional<VarId> leaf;
    for (VarId v : c.scope) {
      if (csp.is_arthur(v)) {
        ++arthur;
      } else if (v == hub) {
        has_hub = true;
      } else {
        if (leaf && *leaf != v) return false;
        leaf = v;
      }
    }
    if (leaf && arthur > 0) return false;
    if (has_hub && arthur > 1) return false;
  }
  return true;
}

namespace {

// Exact maximization over z for star-shaped CSPs: once the hub symbol s is
// fixed, every other Merlin variable only meets constraints that no other
// free variable touches, so it can be optimized independently.
class StarSolver {
 public:
  explicit StarSolver(const Csp& csp) : csp_(csp) {
    if (!star_structure_valid(csp)) throw ValidationError("CSP does not have a valid star structure");
    hub_var_ = csp.merlin_var(*csp.hub());
    hub_size_ = csp.alphabet(hub_var_);
    ell_ = csp.arthur_count();
    gain_.assign(static_cast<std::size_t>(hub_size_) * ell_ * 2, 0);
    base_.assign(hub_size_, 0);
    leaf_constraints_.resize(csp.merlin_count());

    for (std::size_t ci = 0; ci < csp.num_constraints(); ++ci) {
      const Constraint& c = csp.constraints()[ci];
      bool has_hub = false;
      std::optional<VarId> arthur;
      std::optional<VarId> leaf;
      bool arthur_only = true;
      for (VarId v : c.scope) {
        if (csp.is_arthur(v)) {
          arthur = v;
        } else {
          arthur_only = false;
          if (v == hub_var_) has_hub = true;
          else leaf = v;
        }
      }
      if (arthur_only) {
        arthur_only_.push_back(&c);
      } else if (leaf) {
        leaf_constraints_[*leaf - csp.arthur_count()].push_back(&c);
      } else if (arthur) {
        for (Symbol s = 0; s < hub_size_; ++s) {
          for (Symbol bit = 0; bit < 2; ++bit) {
            gain_[gain_index(s, *arthur, bit)] += eval(c, s, *arthur, bit);
          }
        }
      } else if (has_hub) {
        for (Symbol s = 0; s < hub_size_; ++s) base_[s] += eval(c, s, hub_var_, 0);
      }
    }
    for (std::size_t m = 0; m < csp.merlin_count(); ++m) {
      if (leaf_constraints_[m].empty()) continue;
      leaves_.push_back(m);
    }
    for (Symbol s = 0; s < hub_size_; ++s) {
      for (auto m : leaves_) base_[s] += best_leaf(m, s).first;
    }
  }

  std::size_t max_for(const BitString& r, std::vector<Symbol>* argmax) const {
    std::size_t best = 0;
    std::vector<Symbol> best_z;
    for (Symbol s = 0; s < hub_size_; ++s) {
      std::size_t score = base_[s];
      for (std::size_t j = 0; j < ell_; ++j) score += gain_[gain_index(s, static_cast<VarId>(j), r[j])];
      if (s == 0 || score > best) {
        best = score;
        if (argmax) best_z = candidate(s);
      } else if (argmax && score == best) {
        auto z = candidate(s);
        if (z < best_z) best_z = std::move(z);
      }
    }
    if (argmax) *argmax = std::move(best_z);
    return best + arthur_only_score(r);
  }

  // Max satisfied count for every r with index in [lo, hi) of the Gray-code
  // sequence, written to out[gray(i)].
  void max_gray_range(std::uint64_t lo, std::uint64_t hi, std::vector<std::size_t>& out) const {
    if (lo >= hi) return;
    std::uint64_t g = lo ^ (lo >> 1);
    BitString r = BitString::from_index(g, ell_);
    std::vector<std::size_t> score(hub_size_);
    for (Symbol s = 0; s < hub_size_; ++s) {
      std::size_t sc = base_[s];
      for (std::size_t j = 0; j < ell_; ++j) sc += gain_[gain_index(s, static_cast<VarId>(j), r[j])];
      score[s] = sc;
    }
    for (std::uint64_t i = lo;;) {
      out[g] = *std::max_element(score.begin(), score.end()) + arthur_only_score(r);
      if (++i >= hi) break;
      const std::uint64_t next = i ^ (i >> 1);
      const auto bit = static_cast<std::size_t>(__builtin_ctzll(next ^ g));
      const std::size_t pos = ell_ - 1 - bit;
      const Symbol old_v = r[pos];
      const Symbol new_v = old_v ^ 1U;
      for (Symbol s = 0; s < hub_size_; ++s) {
        score[s] = score[s] - gain_[gain_index(s, static_cast<VarId>(pos), old_v)] +
                   gain_[gain_index(s, static_cast<VarId>(pos), new_v)];
      }
      r.flip(pos);
      g = next;
    }
  }

 private:
  std::size_t gain_index(Symbol s, VarId arthur, Symbol bit) const {
    return (static_cast<std::size_t>(s) * ell_ + arthur) * 2 + bit;
  }

  // Evaluates a constraint whose scope holds only the hub and `other`.
  std::uint8_t eval(const Constraint& c, Symbol hub_symbol, VarId other, Symbol other_symbol) const {
    std::size_t idx = 0;
    for (VarId v : c.scope) {
      idx = idx * csp_.alphabet(v) + (v == hub_var_ ? hub_symbol : v == other ? other_symbol : 0);
    }
    return c.table[idx];
  }

  std::pair<std::size_t, Symbol> best_leaf(std::size_t merlin_index, Symbol s) const {
    const VarId v = csp_.merlin_var(merlin_index);
    const Symbol size = csp_.alphabet(v);
    std::size_t best = 0;
    Symbol arg = 0;
    for (Symbol sym = 0; sym < size; ++sym) {
      std::size_t sc = 0;
      for (const Constraint* c : leaf_constraints_[merlin_index]) sc += eval(*c, s, v, sym);
      if (sym == 0 || sc > best) {
        best = sc;
        arg = sym;
      }
    }
    return {best, arg};
  }

  std::vector<Symbol> candidate(Symbol s) const {
    std::vector<Symbol> z(csp_.merlin_count(), 0);
    z[*csp_.hub()] = s;
    for (auto m : leaves_) z[m] = best_leaf(m, s).second;
    return z;
  }

  std::size_t arthur_only_score(const BitString& r) const {
    std::size_t sc = 0;
    for (const Constraint* c : arthur_only_) {
      std::size_t idx = 0;
      for (VarId v : c->scope) idx = idx * 2 + r[v];
      sc += c->table[idx];
    }
    return sc;
  }

  const Csp& csp_;
  VarId hub_var_ = 0;
  Symbol hub_size_ = 0;
  std::size_t ell_ = 0;
  std::vector<std::uint32_t> gain_;
  std::vector<std::size_t> base_;
  std::vector<const Constraint*> arthur_only_;
  std::vector<std::vector<const Constraint*>> leaf_constraints_;
  std::vector<std::size_t> leaves_;
};

std::uint64_t merlin_space(const Csp& csp, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (Symbol s : csp.merlin_alphabets()) {
    if (total > cap / s + 1) return cap + 1;
    total *= s;
  }
  return total;
}

MaxResult brute_force_max(const Csp& csp, const BitString& r, bool want_argmax) {
  MaxResult result;
  result.constraints = csp.num_constraints();
  std::vector<Symbol> z(csp.merlin_count(), 0);
  bool first = true;
  for (;;) {
    std::size_t sat = 0;
    for (const auto& c : csp.constraints()) sat += c.table[table_index(csp, c, r, z)];
    if (first || sat > result.satisfied) {
      result.satisfied = sat;
      if (want_argmax) result.argmax = z;
      first = false;
      if (sat == result.constraints) break;
    }
    // Odometer, last variable fastest: lexicographic order.
    bool advanced = false;
    for (std::size_t i = z.size(); i-- > 0;) {
      if (++z[i] < csp.merlin_alphabets()[i]) {
        advanced = true;
        break;
      }
      z[i] = 0;
    }
    if (!advanced) break;
  }
  return result;
}

bool use_fast_path(const Csp& csp, const MaxOptions& options) {
  return options.allow_fast_path && csp.hub() && star_structure_valid(csp);
}

}  // namespace

MaxResult max_val_over_z(const Csp& csp, const BitString& r, const MaxOptions& options) {
  if (r.size() != csp.arthur_count()) throw ValidationError("max_val_over_z: |r| does not match the CSP");
  if (use_fast_path(csp, options)) {
    StarSolver solver(csp);
    MaxResult result;
    result.constraints = csp.num_constraints();
    result.fast_path = true;
    result.satisfied = solver.max_for(r, options.want_argmax ? &result.argmax : nullptr);
    return result;
  }
  if (merlin_space(csp, options.brute_force_limit) > options.brute_force_limit) {
    throw LimitError("max_val_over_z: Merlin search space exceeds limit " +
                     std::to_string(options.brute_force_limit) + " and no fast path applies");
  }
  return brute_force_max(csp, r, options.want_argmax);
}

Rational GapProfile::fraction_full() const {
  if (records.empty()) return 0;
  std::size_t full = 0;
  for (const auto& rec : records) full += rec.max_satisfied == constraints;
  return Rational(BigInt(full), BigInt(records.size()));
}

Rational GapProfile::fraction_above(const Rational& eps) const {
  if (records.empty()) return 0;
  std::size_t above = 0;
  const Rational threshold = 1 - eps;
  for (const auto& rec : records) {
    const Rational v = constraints == 0 ? Rational(1)
                                        : Rational(BigInt(rec.max_satisfied), BigInt(constraints));
    above += v > threshold;
  }
  return Rational(BigInt(above), BigInt(records.size()));
}

double GapProfile::std_error(const Rational& fraction) const {
  if (exhaustive || records.empty()) return 0.0;
  const double p = to_double(fraction);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(records.size()));
}

GapProfile gap_profile(const Csp& csp, const ProfileOptions& options) {
  GapProfile profile;
  profile.arthur = csp.arthur_count();
  profile.constraints = csp.num_constraints();
  profile.exhaustive = options.exhaustive;
  const bool fast = use_fast_path(csp, options.max);
  if (!fast && merlin_space(csp, options.max.brute_force_limit) > options.max.brute_force_limit) {
    throw LimitError("gap_profile: Merlin search space exceeds limit and no fast path applies");
  }
  std::optional<StarSolver> solver;
  if (fast) solver.emplace(csp);

  auto max_for = [&](const BitString& r) {
    if (solver) return solver->max_for(r, nullptr);
    return brute_force_max(csp, r, false).satisfied;
  };

  if (options.exhaustive) {
    if (csp.arthur_count() > options.max_exhaustive_bits) {
      throw LimitError("gap_profile: l=" + std::to_string(csp.arthur_count()) +
                       " exceeds exhaustive limit " + std::to_string(options.max_exhaustive_bits));
    }
    const std::uint64_t total = std::uint64_t{1} << csp.arthur_count();
    std::vector<std::size_t> best(total, 0);
    const std::size_t shards = std::min<std::uint64_t>(16, total);
    for_each_shard(shards, [&](std::size_t s) {
      const std::uint64_t lo = total * s / shards;
      const std::uint64_t hi = total * (s + 1) / shards;
      if (solver) {
        solver->max_gray_range(lo, hi, best);
      } else {
        for (std::uint64_t i = lo; i < hi; ++i) best[i] = max_for(BitString::from_index(i, csp.arthur_count()));
      }
    });
    profile.records.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
      profile.records.push_back(GapRecord{BitString::from_index(i, csp.arthur_count()), best[i]});
    }
  } else {
    profile.seed = options.seed;
    Rng rng(options.seed);
    profile.records.reserve(options.trials);
    for (std::size_t t = 0; t < options.trials; ++t) {
      BitString r(csp.arthur_count());
      for (std::size_t j = 0; j < r.size(); ++j) r.set(j, rng.bit());
      const std::size_t m = max_for(r);
      profile.records.push_back(GapRecord{std::move(r), m});
    }
  }
  profile.samples = profile.records.size();
  return profile;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::Neither: return "NEITHER";
  }
  return "?";
}

Verdict classify_promise(const GapProfile& profile, const Rational& eps, const Rational& s) {
  if (!profile.records.empty() && profile.fraction_full() == 1) return Verdict::Yes;
  if (profile.fraction_above(eps) <= s) return Verdict::No;
  return Verdict::Neither;
}

}  // namespace amcsp
