#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "amcsp/commands.hpp"
#include "amcsp/error.hpp"
#include "amcsp/formats.hpp"

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> limit_exhaustive;
  std::optional<std::string> epsilon;
  std::optional<std::string> backend;
  std::optional<std::string> code;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::string input;
  std::vector<std::string> params;  // key=value, value parsed as JSON when possible
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--trials", f.trials, "Monte Carlo trials");
  sub->add_option("--limit-exhaustive", f.limit_exhaustive, "largest exhaustively enumerated bit length");
  sub->add_option("--epsilon", f.epsilon, "epsilon as p/q or decimal");
  sub->add_option("--backend", f.backend, "PCPP backend id");
  sub->add_option("--code", f.code, "code id (rs, rep5, identity)");
  sub->add_option("--out", f.out, "output file (default: stdout)");
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--param", f.params, "command parameter key=value (repeatable)");
}

amcsp::ExperimentConfig build_config(const std::string& command, const Flags& f) {
  amcsp::ExperimentConfig cfg;
  cfg.command = command;
  if (f.config) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(amcsp::read_file(*f.config));
    } catch (const nlohmann::json::exception& e) {
      throw amcsp::ValidationError(*f.config + ": " + e.what());
    }
    cfg.merge_json(j);
    cfg.command = command;
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.limit_exhaustive) cfg.limit_exhaustive = *f.limit_exhaustive;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.backend) cfg.backend = *f.backend;
  if (f.code) cfg.code = *f.code;
  if (f.out) cfg.out = *f.out;
  if (!f.input.empty()) cfg.input = f.input;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw amcsp::ValidationError("--param expects key=value");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    auto parsed = nlohmann::json::parse(value, nullptr, false);
    cfg.params[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic CSP reduction and experiment toolkit"};
  app.require_subcommand(1);
  Flags flags;

  struct Spec {
    const char* name;
    const char* help;
    const char* positional;
  };
  const Spec specs[] = {
      {"reduce", "reduce a circuit C(r, w) to a stochastic 2-CSP", "circuit"},
      {"gamevalue", "gap profile and YES/NO/NEITHER verdict of a CSP file", "csp"},
      {"walk", "expander-walk deviation frequencies vs the Chernoff bound", nullptr},
      {"concentrate", "generator block-count concentration experiment", nullptr},
      {"amplify", "soundness under parallel or expander repetition", "corpus"},
      {"pipeline", "protocol -> amplified circuit -> CSP, with gap analysis", "corpus"},
  };
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, flags);
    if (s.positional) sub->add_option(s.positional, flags.input, "input file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const auto cfg = build_config(command, flags);
    const auto result = amcsp::run_command(cfg);
    if (cfg.out.empty()) {
      std::cout << result.output;
      std::cerr << result.summary;
    } else {
      amcsp::write_file(cfg.out, result.output);
      std::cout << result.summary;
    }
    return 0;
  } catch (const amcsp::LimitError& e) {
    std::cerr << "error: limit: " << e.what() << '\n';
    return 3;
  } catch (const amcsp::ValidationError& e) {
    std::cerr << "error: " << (flags.input.empty() ? "" : flags.input + ": ") << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
