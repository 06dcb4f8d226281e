// selfsim: batch front end for the spectral computations.
//
//   selfsim verify   [--level N] [--level-min M]
//   selfsim spectrum [--element m.json] [--level N] [--target auto|delta|generator-sum|none]
//   selfsim slice    [--t T ...] [--level N]
//   selfsim omega    [--level N] [--samples K]
//   selfsim orbital  [--point "(1)"] [--gens abcd] [--radius R] [--depth D] [--element m.json]
//   selfsim rigidity [--q Q] [--samples K] [--depth D] [--seed S]
//
// Common: --out DIR, --tol TOL, --config run.json. Exit codes: 0 success,
// 1 invariant failure, 2 usage error.

#include <iostream>

#include <CLI11.hpp>

#include "selfsim/commands.hpp"

namespace {

struct Defaults {
  int level_min;
  int level_max;
  std::uint64_t samples;
  int radius;
};

Defaults defaults_for(selfsim::Command c) {
  using selfsim::Command;
  switch (c) {
    case Command::Verify: return {0, 13, 0, 0};
    case Command::Spectrum: return {0, 8, 0, 0};
    case Command::Slice: return {0, 10, 0, 0};
    case Command::Omega: return {1, 6, 100000, 0};
    case Command::Orbital: return {0, 0, 0, 64};
    case Command::Rigidity: return {0, 0, 10000, 0};
  }
  return {0, 0, 0, 0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of Hecke-type operators for the Grigorchuk group"};
  app.require_subcommand(1);

  selfsim::RunConfig cfg;
  std::optional<int> level;
  std::optional<int> level_min;
  std::optional<std::uint64_t> samples;
  std::optional<int> radius;
  std::vector<double> t_values;
  std::string element_path;
  std::string config_path;

  for (auto c : {selfsim::Command::Verify, selfsim::Command::Spectrum, selfsim::Command::Slice, selfsim::Command::Omega,
                 selfsim::Command::Orbital, selfsim::Command::Rigidity}) {
    auto* sub = app.add_subcommand(selfsim::to_string(c));
    sub->callback([&cfg, c] { cfg.command = c; });
    sub->add_option("--level", level, "level (upper end of the level range)");
    sub->add_option("--level-min", level_min, "lower end of the level range");
    sub->add_option("--t", t_values, "slice parameters t");
    sub->add_option("--element", element_path, "algebra element JSON file");
    sub->add_option("--radius", radius, "ball radius");
    sub->add_option("--samples", samples, "sample count");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--q", cfg.q, "Bernoulli parameter P(0)");
    sub->add_option("--depth", cfg.depth, "boundary depth");
    sub->add_option("--point", cfg.point, "boundary point, e.g. 01(1)");
    sub->add_option("--gens", cfg.gens, "generating set letters, e.g. abcd");
    sub->add_option("--target", cfg.target, "target set: auto, delta, generator-sum, none");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--tol", cfg.tol, "membership tolerance");
    sub->add_option("--config", config_path, "RunConfig JSON (explicit flags are ignored when given)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      cfg = selfsim::run_config_from_json(selfsim::json::parse(selfsim::read_file(config_path)));
    } else {
      const Defaults d = defaults_for(cfg.command);
      cfg.level_max = level.value_or(d.level_max);
      cfg.level_min = level_min.value_or(cfg.command == selfsim::Command::Slice ? 0 : std::min(d.level_min, cfg.level_max));
      cfg.samples = samples.value_or(d.samples);
      cfg.radius = radius.value_or(d.radius);
      if (!t_values.empty()) cfg.t_values = t_values;
      if (!element_path.empty())
        cfg.element = selfsim::algebra_from_json(selfsim::json::parse(selfsim::read_file(element_path)));
    }
    const auto outcome = selfsim::run_command(cfg);
    for (const auto& msg : outcome.messages) std::cout << msg << "\n";
    for (const auto& file : outcome.files) std::cout << "wrote " << file << "\n";
    return outcome.exit_code;
  } catch (const selfsim::Error& e) {
    std::cerr << "selfsim: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "selfsim: " << e.what() << "\n";
    return 2;
  }
}
