#include <cstdlib>
#include <iostream>
#include <utility>

#include "CLI11.hpp"
#include "nchns/commands.hpp"
#include "nchns/config.hpp"
#include "nchns/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nonlocal Cahn-Hilliard-Navier-Stokes optimal control"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::int64_t seed = -1;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "run the forward model and write the trajectory"},
      {"tangent-check", "Taylor test of the linearized solver"},
      {"gradient-check", "Taylor test of the reduced gradient plus adjoint duality gap"},
      {"optimize", "projected-gradient solve of the control problem"},
      {"validate", "check hypotheses and config without solving"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "seed (overrides the config seed)")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  nchns::RunConfig cfg;
  try {
    cfg = nchns::parse_config(config_path);
  } catch (const nchns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    std::cout << R"({"command":")" << command << R"(","check":"config","key":")" << e.key() << "\"}\n";
    return 1;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  return nchns::run_command(command, cfg, std::cout);
}
