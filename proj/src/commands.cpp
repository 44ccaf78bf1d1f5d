#include "amcsp/commands.hpp"

#include <algorithm>
#include <cmath>

#include "amcsp/error.hpp"
#include "amcsp/expander.hpp"
#include "amcsp/formats.hpp"
#include "amcsp/generator.hpp"
#include "amcsp/protocol.hpp"
#include "amcsp/reduction.hpp"
#include "amcsp/report.hpp"

namespace amcsp {

using nlohmann::json;

json ExperimentConfig::to_json() const {
  return json{{"command", command},   {"seed", seed},       {"trials", trials},
              {"limit_exhaustive", limit_exhaustive},       {"epsilon", epsilon},
              {"backend", backend},   {"code", code},       {"input", input},
              {"out", out},           {"params", params}};
}

void ExperimentConfig::merge_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") command = value.get<std::string>();
      else if (key == "seed") seed = value.get<std::uint64_t>();
      else if (key == "trials") trials = value.get<std::size_t>();
      else if (key == "limit_exhaustive") limit_exhaustive = value.get<std::size_t>();
      else if (key == "epsilon") epsilon = value.is_string() ? value.get<std::string>() : value.dump();
      else if (key == "backend") backend = value.get<std::string>();
      else if (key == "code") code = value.get<std::string>();
      else if (key == "input") input = value.get<std::string>();
      else if (key == "out") out = value.get<std::string>();
      else if (key == "params") {
        if (!value.is_object()) throw ValidationError("config 'params' must be an object");
        for (const auto& [pk, pv] : value.items()) params[pk] = pv;
      } else {
        throw ValidationError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

namespace {

template <class T>
T param(const ExperimentConfig& cfg, const char* key, T fallback) {
  if (!cfg.params.contains(key)) return fallback;
  try {
    return cfg.params.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config param '") + key + "': " + e.what());
  }
}

Rational rational_param(const ExperimentConfig& cfg, const char* key, const std::string& fallback) {
  if (!cfg.params.contains(key)) return parse_rational(fallback);
  const auto& v = cfg.params.at(key);
  return parse_rational(v.is_string() ? v.get<std::string>() : v.dump());
}

Report start_report(const ExperimentConfig& cfg) {
  Report r;
  r.metadata.emplace_back("tool", kToolVersion);
  r.metadata.emplace_back("command", cfg.command);
  r.metadata.emplace_back("config", cfg.to_json().dump());
  r.metadata.emplace_back("seed", std::to_string(cfg.seed));
  r.metadata.emplace_back("wall_clock", wall_clock_utc());
  return r;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string label(const std::optional<bool>& yes) { return !yes ? "UNKNOWN" : *yes ? "YES" : "NO"; }

std::vector<AmProtocol> corpus_for(const ExperimentConfig& cfg) {
  auto all = cfg.input.empty() ? toy_corpus(cfg.seed) : load_corpus(cfg.input);
  if (!cfg.params.contains("instances")) return all;
  const auto wanted = param<std::vector<std::string>>(cfg, "instances", {});
  std::vector<AmProtocol> out;
  for (const auto& id : wanted) {
    auto it = std::find_if(all.begin(), all.end(), [&](const AmProtocol& p) { return p.id == id; });
    if (it == all.end()) throw ValidationError("no corpus instance '" + id + "'");
    out.push_back(*it);
  }
  return out;
}

ReductionOptions reduction_options(const ExperimentConfig& cfg) {
  ReductionOptions o;
  o.code = cfg.code;
  o.backend = cfg.backend;
  o.epsilon = parse_rational(cfg.epsilon);
  o.u_alphabet = param<Symbol>(cfg, "u_alphabet", 3);
  o.limits.max_challenge_bits = cfg.limit_exhaustive;
  return o;
}

}  // namespace

CommandResult cmd_reduce(const ExperimentConfig& cfg) {
  if (cfg.input.empty()) throw ValidationError("reduce: a circuit file is required");
  Circuit c = parse_circuit(read_file(cfg.input));
  if (c.name().empty()) c.set_name(cfg.input.substr(cfg.input.find_last_of('/') + 1));
  const auto out = build_stochastic_csp(c, reduction_options(cfg));

  Report r;
  r.add_summary("l", std::to_string(out.r_len()));
  r.add_summary("N", std::to_string(out.witness_bits));
  r.add_summary("N_prime", std::to_string(out.code.codeword_bits));
  r.add_summary("b", std::to_string(out.params.blocks));
  r.add_summary("gamma", to_string(out.params.gamma));
  r.add_summary("nu", to_string(out.params.nu));
  r.add_summary("eta", to_string(out.params.eta));
  r.add_summary("beta", to_string(out.params.beta));
  r.add_summary("constraints", std::to_string(out.psi.num_constraints()));
  r.add_summary("proof_alphabet", std::to_string(out.pcpp.alphabet_size));
  r.add_summary("constant_alphabet", yes_no(out.pcpp.constant_alphabet));
  if (!out.pcpp.constant_alphabet) {
    r.add_summary("note", "backend '" + out.pcpp.backend + "' alphabet grows with |Q^-1(1)|");
  }
  return {write_csp(out.psi), r.summary_text()};
}

CommandResult cmd_gamevalue(const ExperimentConfig& cfg) {
  if (cfg.input.empty()) throw ValidationError("gamevalue: a CSP file is required");
  const Csp csp = parse_csp(read_file(cfg.input));
  const std::string mode = param<std::string>(cfg, "mode", "exhaustive");
  if (mode != "exhaustive" && mode != "sampled") throw ValidationError("mode must be exhaustive or sampled");
  const Rational eps = parse_rational(cfg.epsilon);
  const Rational s = rational_param(cfg, "s", "1/3");

  ProfileOptions po;
  po.exhaustive = mode == "exhaustive";
  po.trials = cfg.trials;
  po.seed = cfg.seed;
  po.max_exhaustive_bits = cfg.limit_exhaustive;
  po.max.want_argmax = false;
  const auto prof = gap_profile(csp, po);

  Report r = start_report(cfg);
  r.columns = {"r", "max_satisfied", "constraints", "max_val"};
  for (const auto& rec : prof.records) {
    const Rational v = prof.constraints == 0 ? Rational(1)
                                             : Rational(BigInt(rec.max_satisfied), BigInt(prof.constraints));
    r.add_row({rec.r.to_string(), std::to_string(rec.max_satisfied), std::to_string(prof.constraints),
               to_string(v)});
  }
  const auto full = prof.fraction_full();
  const auto above = prof.fraction_above(eps);
  r.add_summary("mode", mode);
  r.add_summary("arthur", std::to_string(prof.arthur));
  r.add_summary("constraints", std::to_string(prof.constraints));
  r.add_summary("samples", std::to_string(prof.samples));
  r.add_summary("epsilon", to_string(eps));
  r.add_summary("s", to_string(s));
  r.add_summary("fraction_full", to_string(full));
  r.add_summary("fraction_above", to_string(above));
  r.add_summary("std_error", format_double(prof.std_error(above)));
  r.add_summary("exact", yes_no(prof.exhaustive));
  r.add_summary("verdict", to_string(classify_promise(prof, eps, s)));
  return {r.csv(), r.summary_text()};
}

CommandResult cmd_walk(const ExperimentConfig& cfg) {
  const auto side = param<std::size_t>(cfg, "side", 9);
  const auto epsilons = param<std::vector<double>>(cfg, "epsilons", {0.1, 0.2, 0.3});
  const auto lengths = param<std::vector<std::size_t>>(cfg, "lengths", {16, 64});
  const Rational density = rational_param(cfg, "density", "1/2");
  const bool baseline = param<bool>(cfg, "baseline", true);

  std::vector<ExpanderGraph> graphs{build_margulis(side)};
  if (baseline) graphs.push_back(build_complete(side * side, true));

  Report r = start_report(cfg);
  r.metadata.emplace_back("note", "graph family: Margulis-Gabber-Galil, degree 8; lambda measured by power iteration");
  r.columns = {"graph", "eps", "lambda", "m", "trials", "frequency", "bound", "sigma", "within_3sigma"};
  bool all_within = true;
  double lambda_main = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    auto& g = graphs[gi];
    const double lambda = g.measure_lambda();
    if (gi == 0) lambda_main = lambda;
    const auto count = static_cast<std::size_t>(floor_of(density * g.vertices() + Rational(1, 2)));
    if (cfg.trials == 0) continue;
    for (const auto m : lengths) {
      std::vector<VertexFunction> fs;
      for (std::size_t i = 0; i < m; ++i) fs.push_back(random_indicator(g.vertices(), count, derive_seed(cfg.seed, 100 + i)));
      for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
        const double eps = epsilons[ei];
        const auto dev = empirical_deviation(g, fs, eps, cfg.trials, derive_seed(cfg.seed, gi * 1000 + m * 10 + ei));
        const double bound = chernoff_bound(eps, lambda, m);
        const bool ok = dev.frequency <= bound + 3 * dev.std_error;
        all_within = all_within && ok;
        r.add_row({g.family(), format_double(eps), format_double(lambda), std::to_string(m),
                   std::to_string(cfg.trials), format_double(dev.frequency), format_double(bound),
                   format_double(dev.std_error), yes_no(ok)});
      }
    }
  }
  r.add_summary("lambda", format_double(lambda_main));
  r.add_summary("rows", std::to_string(r.rows.size()));
  r.add_summary("all_within_3sigma", yes_no(all_within));
  return {r.csv(), r.summary_text()};
}

CommandResult cmd_concentrate(const ExperimentConfig& cfg) {
  const auto block_len = param<std::size_t>(cfg, "block_len", 6);
  const auto k = param<std::size_t>(cfg, "k", 64);
  const auto delta = param<double>(cfg, "delta", 0.25);
  const auto families = param<std::vector<std::string>>(cfg, "families", {"zero", "rotation", "affine"});
  const auto rb_samples = param<std::size_t>(cfg, "rb_samples", 16);
  const std::string lang = param<std::string>(cfg, "language", "RANDOM(7,1/2)");
  ToyLanguage L = lang.find('\n') == std::string::npos && lang.rfind("language", 0) != 0
                      ? parse_language("language block_len=" + std::to_string(block_len) + "\npredicate " + lang + "\n")
                      : parse_language(lang);
  if (cfg.params.contains("language_file")) L = parse_language(read_file(param<std::string>(cfg, "language_file", "")));
  if (cfg.trials == 0) throw ValidationError("concentrate: trials must be positive");

  Report r = start_report(cfg);
  r.metadata.emplace_back("language", L.description + " density=" + to_string(L.density()));
  r.columns = {"family", "scope", "k", "delta", "lambda", "trials", "frequency", "bound", "sigma", "within_3sigma"};
  bool all_within = true;
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const auto spec = make_generator(block_len, k, parse_offset_family(families[fi]));
    const auto res = concentration_experiment(L, spec, delta, cfg.trials, derive_seed(cfg.seed, fi), rb_samples);
    auto row = [&](const std::string& scope, const DeviationResult& d) {
      const bool ok = d.frequency <= res.bound + 3 * d.std_error;
      all_within = all_within && ok;
      r.add_row({families[fi], scope, std::to_string(k), format_double(delta), format_double(res.lambda),
                 std::to_string(d.trials), format_double(d.frequency), format_double(res.bound),
                 format_double(d.std_error), yes_no(ok)});
    };
    row("all", res.overall);
    for (const auto& c : res.conditional) row("rb=" + (c.r_b.empty() ? std::string("-") : c.r_b.to_string()), c.deviation);
  }
  r.add_summary("density", to_string(L.density()));
  r.add_summary("rows", std::to_string(r.rows.size()));
  r.add_summary("all_within_3sigma", yes_no(all_within));
  return {r.csv(), r.summary_text()};
}

CommandResult cmd_amplify(const ExperimentConfig& cfg) {
  const auto ts = param<std::vector<std::size_t>>(cfg, "ts", {1, 2, 3});
  const auto amplifiers = param<std::vector<std::string>>(cfg, "amplifiers", {"parallel", "expander"});
  const auto corpus = corpus_for(cfg);

  Report r = start_report(cfg);
  r.metadata.emplace_back("note", "expander amplification is EXPERIMENTAL; its soundness is measured, not guaranteed");
  r.columns = {"id", "label", "amplifier", "t", "seed_bits", "soundness", "base_soundness_pow_t", "exact", "sigma", "experimental"};
  for (std::size_t pi = 0; pi < corpus.size(); ++pi) {
    const auto& p = corpus[pi];
    SoundnessOptions base_opts;
    base_opts.limits.max_challenge_bits = cfg.limit_exhaustive;
    const auto base = measure_soundness(p, base_opts);
    for (const auto& amp : amplifiers) {
      for (const auto t : ts) {
        AmProtocol q;
        if (amp == "parallel") {
          q = parallel_repeat(p, t);
        } else if (amp == "expander") {
          const AmProtocol even = p.r_len() % 2 == 0 ? p : pad_challenge(p, 1);
          q = expander_repeat(even, build_margulis(std::size_t{1} << (even.r_len() / 2)), t);
          q.experimental = true;
        } else {
          throw ValidationError("unknown amplifier '" + amp + "'");
        }
        SoundnessOptions so;
        so.limits.max_challenge_bits = cfg.limit_exhaustive;
        so.trials = cfg.trials;
        so.seed = derive_seed(cfg.seed, pi * 1000 + t);
        so.mode = q.r_len() <= cfg.limit_exhaustive ? MeasureMode::Exhaustive : MeasureMode::Sampled;
        const auto s = measure_soundness(q, so);
        Rational pow = 1;
        for (std::size_t i = 0; i < t; ++i) pow *= base.value;
        r.add_row({p.id, label(p.yes), amp, std::to_string(t), std::to_string(q.r_len()),
                   s.exhaustive ? to_string(s.value) : format_double(to_double(s.value)), to_string(pow),
                   yes_no(s.exhaustive), format_double(s.std_error), yes_no(q.experimental)});
      }
    }
  }
  r.add_summary("instances", std::to_string(corpus.size()));
  r.add_summary("rows", std::to_string(r.rows.size()));
  return {r.csv(), r.summary_text()};
}

CommandResult cmd_pipeline(const ExperimentConfig& cfg) {
  const auto t = param<std::size_t>(cfg, "t", 2);
  const auto amplifier = param<std::string>(cfg, "amplifier", "parallel");
  const auto corpus = corpus_for(cfg);

  Report r = start_report(cfg);
  if (amplifier == "expander") r.metadata.emplace_back("note", "expander amplification is EXPERIMENTAL");
  r.columns = {"id", "label", "amplifier", "t", "l2", "satisfiable", "l1", "D", "alpha", "c_meas",
               "eps_meas", "fraction_full", "fraction_above", "bound", "verdict", "as_labelled"};
  bool all_ok = true;
  PipelineOptions po;
  po.amplifier = amplifier;
  po.t = t;
  po.reduction = reduction_options(cfg);
  for (const auto& p : corpus) {
    const auto res = theorem1_pipeline(p, po);
    const auto a = analyze_pipeline(res, cfg.limit_exhaustive);
    bool ok = true;
    if (p.yes && *p.yes) ok = a.verdict == Verdict::Yes;
    if (p.yes && !*p.yes) ok = a.bound_applies && a.fraction_above <= a.bound && a.verdict == Verdict::No;
    all_ok = all_ok && ok;
    r.add_row({p.id, label(p.yes), amplifier, std::to_string(t), std::to_string(a.l2),
               std::to_string(a.satisfiable), std::to_string(a.l1), format_double(a.D),
               to_string(a.alpha), to_string(a.c_meas), to_string(a.eps_meas), to_string(a.fraction_full),
               to_string(a.fraction_above), to_string(a.bound), to_string(a.verdict), yes_no(ok)});
    r.add_summary("verdict." + p.id, to_string(a.verdict));
  }
  r.add_summary("all_as_labelled", yes_no(all_ok));
  return {r.csv(), r.summary_text()};
}

CommandResult run_command(const ExperimentConfig& cfg) {
  if (cfg.command == "reduce") return cmd_reduce(cfg);
  if (cfg.command == "gamevalue") return cmd_gamevalue(cfg);
  if (cfg.command == "walk") return cmd_walk(cfg);
  if (cfg.command == "concentrate") return cmd_concentrate(cfg);
  if (cfg.command == "amplify") return cmd_amplify(cfg);
  if (cfg.command == "pipeline") return cmd_pipeline(cfg);
  throw ValidationError("unknown command '" + cfg.command + "'");
}

}  // namespace amcsp
