// Self-check suite run by `kickscope verify`: the invariants of every module,
// evaluated at the configured (desk-scale) geometry and grid.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kickscope/config.hpp"

namespace kickscope::verify {

enum class Status { Pass, Fail, Skipped };

struct Check {
  std::string module;
  std::string name;
  Status status = Status::Fail;
  std::string detail;
};

std::vector<Check> run_suite(const config::RunConfig& cfg);
void print_table(const std::vector<Check>& checks, std::ostream& out);
bool all_passed(const std::vector<Check>& checks);

}  // namespace kickscope::verify
