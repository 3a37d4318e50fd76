// kickscope: two-slit interference with an imperfect which-way detector.
//
//   kickscope run|scan|sample|verify [--config <path>] [--out <dir>]
//             [--c-values a,b,c] [--seed N]

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "kickscope/commands.hpp"
#include "kickscope/errors.hpp"

namespace {

std::filesystem::path output_dir(const std::string& flag, const kickscope::config::RunConfig& cfg) {
  if (!flag.empty()) return flag;
  if (cfg.output.dir) return *cfg.output.dir;
  if (const char* env = std::getenv("KICKSCOPE_OUT"); env && *env) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = kickscope::cli;

  CLI::App app{"Two-slit interference with an imperfect which-way detector"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_flag;
  std::string c_values;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
  };
  auto* run = app.add_subcommand("run", "simulate one configuration; write pattern, momentum and summary");
  auto* scan = app.add_subcommand("scan", "tabulate visibility and kick observables across c");
  auto* sample = app.add_subcommand("sample", "draw Monte Carlo detection events");
  auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 0 iff all pass");
  for (auto* sub : {run, scan, sample, verify}) add_common(sub);
  for (auto* sub : {run, scan, sample}) sub->add_option("--out", out_flag, "output directory");
  scan->add_option("--c-values", c_values, "comma-separated overlap magnitudes");
  auto* seed_opt = sample->add_option("--seed", seed, "random seed (overrides sampling.seed)");
  verify->add_option("--seed", seed, "random seed for the Monte Carlo checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  kickscope::config::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = kickscope::config::load_config(config_path);
    if (seed_opt->count() > 0 || verify->get_option("--seed")->count() > 0) cfg.sampling.seed = seed;
    if (!c_values.empty()) cfg.scan_c_values = kickscope::config::parse_real_list(c_values, "--c-values");
  } catch (const kickscope::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kExitConfigError;
  }

  if (*run) return cli::cmd_run(cfg, output_dir(out_flag, cfg), std::cout, std::cerr);
  if (*scan) return cli::cmd_scan(cfg, cfg.scan_c_values, output_dir(out_flag, cfg), std::cout, std::cerr);
  if (*sample) return cli::cmd_sample(cfg, output_dir(out_flag, cfg), std::cout, std::cerr);
  return cli::cmd_verify(cfg, std::cout, std::cerr);
}
