// exforge: construct, certify, sieve and survey from the command line.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "exforge/cli.hpp"

int main(int argc, char** argv) {
  using namespace exforge::cli;

  CLI::App app{"Explicit expander construction and spectral certification"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--tolerance", cfg.tolerance, "Eigensolver residual tolerance, relative to degree")
      ->envname("EXFORGE_TOLERANCE");
  app.add_option("--dense-threshold", cfg.dense_threshold, "Largest vertex count for dense diagonalization")
      ->envname("EXFORGE_DENSE_THRESHOLD");
  app.add_option("--budget", cfg.size_budget, "Maximum vertex count of constructed graphs")
      ->envname("EXFORGE_BUDGET");
  app.add_option("--seed", cfg.seed, "Seed for the iterative eigensolver")->envname("EXFORGE_SEED");
  app.add_option("--out", cfg.output_dir, "Directory for reports, CSV and sieve output")
      ->envname("EXFORGE_OUT");

  std::uint64_t lo = 0, hi = 0, stride = 1;
  auto* sieve = app.add_subcommand("sieve", "Scan (x - x^(101/232), x] for almost-prime witnesses");
  sieve->add_option("lo", lo)->required();
  sieve->add_option("hi", hi)->required();
  sieve->add_option("stride", stride);

  std::string spec, path;
  auto* construct = app.add_subcommand("construct", "Build a graph and write it in edge-list format");
  construct->add_option("spec", spec, "e.g. complete:4, paley:13, lps:5,13, pipeline:8,lps,1, cycle:5+k2")
      ->required();
  construct->add_option("output", path)->required();

  auto* certify = app.add_subcommand("certify", "Measure lambda2 of a graph file against the bounds");
  certify->add_option("graph", path)->required();

  auto* spectrum = app.add_subcommand("spectrum", "Print the adjacency spectrum of a graph file");
  spectrum->add_option("graph", path)->required();

  unsigned k_lo = 0, k_hi = 0;
  std::string strategy;
  auto* survey = app.add_subcommand("survey", "Plan, build and certify every degree in a range");
  survey->add_option("k_lo", k_lo)->required();
  survey->add_option("k_hi", k_hi)->required();
  survey->add_option("strategy", strategy, "lps or paper")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*sieve) return cmd_sieve(lo, hi, stride, cfg, std::cout, std::cerr);
  if (*construct) return cmd_construct(spec, path, cfg, std::cout, std::cerr);
  if (*certify) return cmd_certify(path, cfg, std::cout, std::cerr);
  if (*spectrum) return cmd_spectrum(path, cfg, std::cout, std::cerr);
  if (*survey) {
    if (k_lo > k_hi) {
      std::cerr << "error: survey range is empty (k_lo > k_hi)\n" << app.help();
      return kUsage;
    }
    return cmd_survey(k_lo, k_hi, strategy, cfg, std::cout, std::cerr);
  }
  return kUsage;
}
