#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "robinfem/runner.hpp"

namespace {

int load_config(const std::string& path, std::uint64_t seed_override, bool has_seed,
                robinfem::RunConfig& out) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "error: cannot read config file " << path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << is.rdbuf();
  auto parsed = robinfem::parse_config(buf.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) {
      if (e.line > 0) {
        std::cerr << path << ":" << e.line << ": " << e.message << "\n";
      } else {
        std::cerr << path << ": " << e.message << "\n";
      }
    }
    return 2;
  }
  out = parsed.config;
  if (has_seed) out.seed = seed_override;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robinfem: p-Laplacian Robin problems with singular boundary data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key = value grammar)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for the random-sample property checks");
    sub->add_flag("--quiet", quiet, "suppress console output");
  };

  CLI::App* cmd_solve = app.add_subcommand("solve", "run the regularization ladder");
  CLI::App* cmd_verify = app.add_subcommand("verify", "manufactured/exact convergence studies");
  CLI::App* cmd_estimates = app.add_subcommand("estimates", "run the estimate diagnostics");
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "vary one parameter over a grid");
  for (auto* c : {cmd_solve, cmd_verify, cmd_estimates, cmd_sweep}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  robinfem::RunConfig cfg;
  const bool has_seed = app.count_all() && (cmd_solve->count("--seed") || cmd_verify->count("--seed") ||
                                            cmd_estimates->count("--seed") || cmd_sweep->count("--seed"));
  if (int rc = load_config(config_path, seed, has_seed, cfg)) return rc;

  try {
    if (cmd_solve->parsed()) return robinfem::run_solve(cfg, out_dir, quiet);
    if (cmd_verify->parsed()) return robinfem::run_verify(cfg, out_dir, quiet);
    if (cmd_estimates->parsed()) return robinfem::run_estimates(cfg, out_dir, quiet);
    if (cmd_sweep->parsed()) return robinfem::run_sweep(cfg, out_dir, quiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
