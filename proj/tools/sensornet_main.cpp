#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sensornet/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Precision bounds, optimal measurement weights, and protocol "
               "simulation for qubit sensor networks probing parametrized fields"};
  app.require_subcommand(1);

  std::string config_path;
  sensornet::CliOptions cli;
  std::uint64_t seed_value = 0;
  bool seed_set = false;
  std::string out_dir;
  bool out_set = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON problem configuration")->required();
    sub->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--out", out_dir, "output directory for CSV files")
        ->each([&](const std::string&) { out_set = true; });
    sub->add_flag("--quiet", cli.quiet, "suppress the stdout report");
  };

  add_common(app.add_subcommand("solve", "bound, protocol, and dual problem values"));
  add_common(app.add_subcommand("simulate", "Monte-Carlo GHZ and unentangled protocols"));
  add_common(app.add_subcommand("sweep", "two-step protocol MSE convergence sweep"));
  add_common(app.add_subcommand("place", "derivative-free sensor placement search"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sensornet::kExitUsage;
  }

  if (seed_set) cli.seed = seed_value;
  if (out_set) cli.out_dir = out_dir;

  sensornet::RunConfig config;
  try {
    config = sensornet::load_config(config_path);
  } catch (const sensornet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return sensornet::kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return sensornet::run_command(name, config, cli, std::cout, std::cerr);
}
