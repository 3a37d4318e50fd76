#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fourier.hpp"
#include "kickscope/experiment.hpp"

namespace kickscope::experiment {
namespace {

// Circular running mean over `width` bins, centered on each bin.
std::vector<double> running_mean(const std::vector<double>& v, std::size_t width) {
  const std::size_t n = v.size();
  std::vector<double> prefix(n + width + 1, 0.0);
  const std::size_t start = n - (width / 2) % n;
  for (std::size_t i = 0; i < n + width; ++i) prefix[i + 1] = prefix[i] + v[(start + i) % n];
  std::vector<double> out(n);
  const double inv = 1.0 / static_cast<double>(width);
  for (std::size_t k = 0; k < n; ++k) out[k] = (prefix[k + width] - prefix[k]) * inv;
  return out;
}

}  // namespace

// Both densities are a slowly varying envelope times a fringe factor of period
// `period`. The raw correlation is weighted by the overlap of the shifted
// envelopes, which drags its peak toward zero lag; dividing by the correlation
// of the fringe-averaged densities leaves only the fringe alignment.
double momentum_shift(const std::vector<double>& a, const std::vector<double>& b, double dp,
                      double period) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("momentum densities must be non-empty and of equal length");
  if (!(dp > 0.0) || !(period > 0.0))
    throw std::invalid_argument("momentum bin and period must be positive");
  const std::size_t n = a.size();
  auto lags = static_cast<std::size_t>(std::ceil(period / dp));
  lags = std::clamp<std::size_t>(lags, 1, n);
  const auto width =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(period / dp)), 1, n);

  const std::vector<double> corr = fourier::circular_correlation(a, b);
  const std::vector<double> envelope =
      fourier::circular_correlation(running_mean(a, width), running_mean(b, width));

  double peak = 0.0;
  double best_score = -1.0;
  for (std::size_t lag = 0; lag < lags; ++lag) {
    if (!(envelope[lag] > 0.0)) continue;
    const double score = corr[lag] / envelope[lag];
    if (score > best_score) {
      best_score = score;
      peak = static_cast<double>(lag);
    }
  }
  return peak * dp;
}

}  // namespace kickscope::experiment
