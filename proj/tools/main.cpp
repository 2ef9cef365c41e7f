#include <iostream>

#include "CLI11.hpp"
#include "dspc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Propagate interval Dempster-Shafer structures through a scalar function"};
  app.require_subcommand(1);

  std::string config_path;
  dspc::cli::RunOptions options;
  std::string out_dir = ".";
  std::string method;
  unsigned order = 0, subdiv = 0;
  std::size_t quad = 0;

  CLI::App* run = app.add_subcommand("run", "Aggregate, propagate and write result tables");
  run->add_option("config", config_path, "Problem description (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--method", method,
                  "chaos-bernstein | interval-baseline | grid-oracle | all (overrides config)");
  run->add_option("--order", order, "Polynomial chaos order (overrides config)");
  run->add_option("--quad", quad, "Gauss-Legendre points per axis (overrides config)");
  run->add_option("--subdiv", subdiv, "Bernstein subdivisions per axis (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  options.out_dir = out_dir;
  if (run->count("--method")) options.method = method;
  if (run->count("--order")) options.order = order;
  if (run->count("--quad")) options.quad_points = quad;
  if (run->count("--subdiv")) options.subdivisions = subdiv;
  return dspc::cli::run(config_path, options, std::cerr);
}
