#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dynlax/cli/commands.hpp"

using namespace dynlax::cli;

int main(int argc, char** argv) {
  CLI::App app{"Dynamical r-matrix spin Calogero-Moser and Toda toolkit"};
  app.require_subcommand(1);

  std::string config_path, format, output, suite;
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--output", output, "output file (default stdout)");
    sub->add_option("--format", format, "trajectory format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "RNG seed for random initial data and verify suites");
    sub->add_option("--tolerance", tolerance, "acceptance threshold")->check(CLI::PositiveNumber);
  };
  for (const char* name : {"simulate", "solve-exact", "compare"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    sub->get_option("--config")->required();
  }
  CLI::App* verify = app.add_subcommand("verify", "run a randomized verification suite");
  add_common(verify);
  verify->add_option("suite", suite, "mdybe, algebroid, poisson-axioms, lax, scaling or reduction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  Overrides ov;
  if (sub->count("--output")) ov.output = output;
  if (sub->count("--format")) ov.format = format;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--tolerance")) ov.tolerance = tolerance;
  if (!suite.empty()) ov.suite = suite;

  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    try {
      config = json::parse(in);
    } catch (const json::exception& e) {
      std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
      return kValidation;
    }
  } else {
    // verify without a config defaults to sl(3) with pi' = pi
    config = {{"algebra", {{"series", "A"}, {"rank", 2}}}, {"pi_prime", {1, 2}}};
  }
  return run(parse_command(sub->get_name()), config, ov, std::cout, std::cerr);
}
