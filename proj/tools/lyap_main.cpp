// lyap: config-driven runner for random matrix product experiments.
//
//   lyap <subcommand> --config <path> [--seed S] [--workers W] [--out PATH]

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lyap/config.hpp"
#include "lyap/runner.hpp"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

int execute(lyap::Command command, const Options& opts) {
  nlohmann::json doc = nlohmann::json::object();
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      std::cerr << "error: cannot read config " << opts.config_path << "\n";
      return lyap::kExitIo;
    }
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "config error: <parse>: " << e.what() << "\n";
      return lyap::kExitConfig;
    }
  } else if (command != lyap::Command::Validate) {
    std::cerr << "config error: --config: required for " << lyap::to_string(command) << "\n";
    return lyap::kExitConfig;
  }

  lyap::ExperimentConfig cfg;
  try {
    cfg = lyap::parse_config(doc, command, {opts.seed, opts.workers, opts.out});
  } catch (const lyap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lyap::kExitConfig;
  }

  try {
    const auto rec = lyap::run(cfg);
    if (!rec.message.empty()) std::cerr << rec.message << "\n";
    std::cout << "wrote " << cfg.output_path << " (" << rec.wall_ms << " ms)\n";
    return rec.exit_code;
  } catch (const lyap::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return lyap::kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lyap::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents of products of random matrices"};
  app.set_version_flag("--version", lyap::version());
  app.require_subcommand(1);

  Options opts;
  struct Sub {
    lyap::Command command;
    const char* help;
  };
  const Sub subs[] = {
      {lyap::Command::Estimate, "top exponent from one chain"},
      {lyap::Command::Spectrum, "QR estimate of the leading k exponents"},
      {lyap::Command::Pair, "gamma_1 + gamma_2 from the wedge recursion"},
      {lyap::Command::Least, "least exponent from the distance recursion"},
      {lyap::Command::Tail, "empirical deviation tail curve over many chains"},
      {lyap::Command::Lcd, "least common denominator of a vector (or a pair)"},
      {lyap::Command::SmallBall, "small-ball probability estimate"},
      {lyap::Command::Validate, "run the built-in oracle suite"},
  };
  std::optional<lyap::Command> chosen;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(std::string(lyap::to_string(s.command)), s.help);
    auto* cfg_opt = sc->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (s.command != lyap::Command::Validate) cfg_opt->required();
    sc->add_option("--seed", opts.seed, "override the config seed");
    sc->add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);
    sc->add_option("--out", opts.out, "output path");
    sc->callback([&chosen, c = s.command] { chosen = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lyap::kExitConfig;
  }
  return execute(*chosen, opts);
}
