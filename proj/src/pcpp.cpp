#include "amcsp/pcpp.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "amcsp/error.hpp"

namespace amcsp {

namespace {

void check_inputs(const Circuit& c, std::size_t max_inputs) {
  if (c.num_inputs() > max_inputs) {
    throw LimitError("PCPP: circuit has " + std::to_string(c.num_inputs()) +
                     " inputs, enumeration limit is " + std::to_string(max_inputs));
  }
}

class EnumerativeBackend final : public PcppBackend {
 public:
  std::string id() const override { return "enumerative"; }
  PcppOutput build(const Circuit& c, const PcppBuildOptions& options) const override {
    if (options.accepting) return build_enumerative_pcpp(c, *options.accepting);
    return build_enumerative_pcpp(c, options.max_inputs);
  }
};

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const PcppBackend>> backends;
  Registry() { backends["enumerative"] = std::make_shared<EnumerativeBackend>(); }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_pcpp_backend(std::shared_ptr<const PcppBackend> backend) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.backends[backend->id()] = std::move(backend);
}

std::shared_ptr<const PcppBackend> find_pcpp_backend(const std::string& id) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.backends.find(id);
  if (it == r.backends.end()) throw ValidationError("unknown PCPP backend '" + id + "'");
  return it->second;
}

std::vector<std::string> pcpp_backend_ids() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> ids;
  for (const auto& [k, _] : r.backends) ids.push_back(k);
  return ids;
}

std::vector<BitString> enumerate_accepting(const Circuit& c, std::size_t max_inputs) {
  check_inputs(c, max_inputs);
  SearchLimits limits;
  limits.max_witness_bits = max_inputs;
  std::vector<BitString> out;
  const std::uint64_t total = std::uint64_t{1} << c.r_len();
  for (std::uint64_t i = 0; i < total; ++i) {
    const BitString r = BitString::from_index(i, c.r_len());
    for (const auto& w : all_witnesses(c, r, limits)) out.push_back(BitString::concat(r, w));
  }
  return out;
}

PcppOutput build_enumerative_pcpp(const Circuit& c, std::size_t max_inputs) {
  return build_enumerative_pcpp(c, enumerate_accepting(c, max_inputs));
}

PcppOutput build_enumerative_pcpp(const Circuit& c, std::vector<BitString> accepting) {
  c.validate();
  const std::size_t n = c.num_inputs();
  if (n == 0) throw ValidationError("PCPP: circuit has no inputs");
  std::sort(accepting.begin(), accepting.end());
  accepting.erase(std::unique(accepting.begin(), accepting.end()), accepting.end());
  for (const auto& x : accepting) {
    if (x.size() != n || !c.eval(x)) {
      throw ValidationError("PCPP: supplied accepting input " + x.to_string() + " is rejected by the circuit");
    }
  }

  const auto alphabet = static_cast<Symbol>(std::max<std::size_t>(accepting.size(), 1));
  PcppOutput out;
  out.csp = Csp(n, {alphabet}, 2);
  const VarId z = out.csp.merlin_var(0);
  if (accepting.empty()) {
    out.csp.add_constraint({z, 0}, std::vector<std::uint8_t>(2, 0));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint8_t> table(static_cast<std::size_t>(alphabet) * 2, 0);
      for (std::size_t s = 0; s < accepting.size(); ++s) table[s * 2 + accepting[s][i]] = 1;
      out.csp.add_constraint({z, static_cast<VarId>(i)}, std::move(table));
    }
  }
  out.csp.set_hub(0);
  out.claimed_beta = 1;
  out.alphabet_size = alphabet;
  out.proof_size = 1;
  out.backend = "enumerative";
  out.constant_alphabet = false;
  out.csp.set_meta("backend", out.backend);
  out.csp.set_meta("claimed_beta", to_string(out.claimed_beta));
  out.csp.set_meta("constant_alphabet", "false");
  out.csp.set_meta("proof_size", "1");
  out.honest_proof = [acc = std::make_shared<const std::vector<BitString>>(std::move(accepting))](
                         const BitString& x) -> std::optional<std::vector<Symbol>> {
    auto it = std::lower_bound(acc->begin(), acc->end(), x);
    if (it == acc->end() || *it != x) return std::nullopt;
    return std::vector<Symbol>{static_cast<Symbol>(it - acc->begin())};
  };
  return out;
}

PcppOutput build_pcpp(const Circuit& c, const std::string& backend, const PcppBuildOptions& options) {
  return find_pcpp_backend(backend)->build(c, options);
}

namespace {

struct Landscape {
  std::vector<int> distance;  // -1 = INFINITE
  GapProfile profile;
};

Landscape measure(const Circuit& c, const PcppOutput& p, std::size_t max_inputs) {
  check_inputs(c, max_inputs);
  if (p.csp.arthur_count() != c.num_inputs()) {
    throw ValidationError("PCPP output does not match the circuit's input count");
  }
  SatProfile sat;
  sat.r_len = c.num_inputs();
  sat.sat_r = enumerate_accepting(c, max_inputs);
  Landscape out;
  out.distance = sat.distance_table();
  ProfileOptions opts;
  opts.max_exhaustive_bits = max_inputs;
  opts.max.want_argmax = false;
  out.profile = gap_profile(p.csp, opts);
  return out;
}

}  // namespace

Security certify_security(const Circuit& c, const PcppOutput& p, std::size_t max_inputs) {
  const Landscape land = measure(c, p, max_inputs);
  const std::size_t n = c.num_inputs();
  const std::size_t m = p.csp.num_constraints();
  Security sec;
  for (std::size_t i = 0; i < land.distance.size(); ++i) {
    const int d = land.distance[i];
    if (d <= 0) continue;
    const std::size_t deficit = m - land.profile.records[i].max_satisfied;
    const Rational beta(BigInt(n * deficit), BigInt(m * static_cast<std::size_t>(d)));
    if (sec.vacuous || beta < sec.beta) {
      sec.beta = beta;
      sec.vacuous = false;
    }
  }
  return sec;
}

std::optional<std::string> check_pcpp_contract(const Circuit& c, const PcppOutput& p,
                                               std::size_t max_inputs) {
  const Landscape land = measure(c, p, max_inputs);
  const std::size_t n = c.num_inputs();
  const std::size_t m = p.csp.num_constraints();
  for (std::size_t i = 0; i < land.distance.size(); ++i) {
    const BitString x = BitString::from_index(i, n);
    const int d = land.distance[i];
    const Rational best = m == 0 ? Rational(1)
                                 : Rational(BigInt(land.profile.records[i].max_satisfied), BigInt(m));
    if (d == 0) {
      auto z = p.honest_proof(x);
      if (!z) return "no honest proof for accepting x=" + x.to_string();
      if (val(p.csp, Assignment{x, *z}) != 1) return "honest proof fails for x=" + x.to_string();
      continue;
    }
    const Rational bound = d < 0 ? 1 - p.claimed_beta
                                 : 1 - p.claimed_beta * Rational(BigInt(d), BigInt(n));
    if (best > bound) {
      return "soundness violated at x=" + x.to_string() + ": max Val " + to_string(best) +
             " > " + to_string(bound);
    }
  }
  return std::nullopt;
}

}  // namespace amcsp
