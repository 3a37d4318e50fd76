// Subcommands behind the `kickscope` executable. Each returns the process
// exit code: 0 success, 1 verification failure, 2 configuration error.
#pragma once

#include <array>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "kickscope/config.hpp"
#include "kickscope/experiment.hpp"

namespace kickscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Observables of one configuration.
struct Analysis {
  std::array<double, 3> probabilities{};
  experiment::FringeAnalysis fringe;
  experiment::KickReport kick;
  experiment::StoreyBound storey;
};

/// Full pipeline at the configured detector overlap: assemble, change to the
/// configured basis, propagate, extract fringes and kicks. The pattern and the
/// t = 0 momentum densities are returned through the optional out-params.
Analysis analyze(const config::RunConfig& cfg, experiment::ScreenPattern* pattern = nullptr,
                 experiment::BranchState* pattern_state = nullptr,
                 std::vector<std::vector<double>>* momentum_densities = nullptr);

/// 17 significant digits, "%.17g".
std::string format_real(double v);

struct OutputFile {
  std::string name;
  std::string contents;
};

/// Writes every file to a temporary name first and renames only after all
/// writes succeeded.
void write_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

int cmd_run(const config::RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log,
            std::ostream& err);
int cmd_scan(const config::RunConfig& cfg, const std::vector<double>& c_values,
             const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);
int cmd_sample(const config::RunConfig& cfg, const std::filesystem::path& out_dir,
               std::ostream& log, std::ostream& err);
int cmd_verify(const config::RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace kickscope::cli
