#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "volcap/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Capacity analysis of Volterra-type quadratic forms"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run the analyses listed in a problem spec");
  volcap::cli::RunOptions opts;
  run->add_option("--spec", opts.spec_path, "problem spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", opts.out_dir, "output directory")->required();
  run->add_option("--seed", opts.seed, "seed for randomized checks");
  run->add_flag("--verbose", opts.verbose, "progress on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return volcap::cli::run(opts, std::cerr);
}
