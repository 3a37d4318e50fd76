// Seeded uniform source and goodness-of-fit helpers for detection events.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "kickscope/experiment.hpp"

namespace kickscope::sampling {

/// Portable uniform doubles on [0, 1): the top 53 bits of std::mt19937_64,
/// whose output sequence is fixed by the C++ standard.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Cumulative cell weights of a density: cdf[0] = 0, cdf[j+1] = cdf[j] + w_j.
std::vector<double> cumulative(const std::vector<double>& weights);

/// Inverse of the piecewise-linear CDF for a target in [0, cdf.back()).
double invert_cdf(const std::vector<double>& cdf, double target, double x_min, double dx);

struct GoodnessOfFit {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

/// Pearson chi-square of event positions against a screen pattern, using
/// `bins` bins of equal expected count under the pattern.
GoodnessOfFit chi_square_against(const std::vector<experiment::EventSample>& events,
                                 const experiment::ScreenPattern& pattern, std::size_t bins = 100);

/// Events per outcome label, indexed by branch.
std::array<std::size_t, 3> outcome_counts(const std::vector<experiment::EventSample>& events);

}  // namespace kickscope::sampling
