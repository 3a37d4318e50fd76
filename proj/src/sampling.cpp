#include "kickscope/sampling.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <stdexcept>

namespace kickscope {
namespace sampling {

std::vector<double> cumulative(const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size() + 1, 0.0);
  for (std::size_t j = 0; j < weights.size(); ++j) cdf[j + 1] = cdf[j] + weights[j];
  return cdf;
}

double invert_cdf(const std::vector<double>& cdf, double target, double x_min, double dx) {
  // first cell whose upper edge exceeds target
  const auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), target);
  std::size_t j = static_cast<std::size_t>(it - (cdf.begin() + 1));
  j = std::min(j, cdf.size() - 2);
  const double width = cdf[j + 1] - cdf[j];
  const double frac = width > 0.0 ? std::clamp((target - cdf[j]) / width, 0.0, 1.0) : 0.0;
  return x_min + (static_cast<double>(j) + frac) * dx;
}

GoodnessOfFit chi_square_against(const std::vector<experiment::EventSample>& events,
                                 const experiment::ScreenPattern& pattern, std::size_t bins) {
  if (events.empty()) throw std::invalid_argument("no events to test");
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  const auto& grid = pattern.grid;
  const std::vector<double> cdf = cumulative(pattern.density);
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::invalid_argument("pattern has zero weight");

  // bin edges at the pattern's quantiles
  std::vector<double> edges(bins + 1);
  edges.front() = grid.x_min;
  edges.back() = grid.x_max;
  for (std::size_t k = 1; k < bins; ++k)
    edges[k] = invert_cdf(cdf, total * static_cast<double>(k) / static_cast<double>(bins),
                          grid.x_min, grid.dx());

  std::vector<std::size_t> observed(bins, 0);
  for (const auto& e : events) {
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, e.x);
    observed[static_cast<std::size_t>(it - (edges.begin() + 1))] += 1;
  }
  const double expected = static_cast<double>(events.size()) / static_cast<double>(bins);
  GoodnessOfFit g;
  for (std::size_t k = 0; k < bins; ++k) {
    const double diff = static_cast<double>(observed[k]) - expected;
    g.statistic += diff * diff / expected;
  }
  g.dof = bins - 1;
  boost::math::chi_squared dist(static_cast<double>(g.dof));
  g.p_value = boost::math::cdf(boost::math::complement(dist, g.statistic));
  return g;
}

std::array<std::size_t, 3> outcome_counts(const std::vector<experiment::EventSample>& events) {
  std::array<std::size_t, 3> counts{0, 0, 0};
  for (const auto& e : events) counts[hilbert::branch_index(e.outcome)] += 1;
  return counts;
}

}  // namespace sampling

namespace experiment {

std::vector<EventSample> sample_events(const BranchState& state, std::size_t count,
                                       std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("event count must be >= 1");
  const GridSpec& grid = state.grid();

  std::array<std::vector<double>, 3> cdfs;
  std::array<double, 3> weight{0.0, 0.0, 0.0};
  std::size_t last_nonempty = 0;
  for (std::size_t b = 0; b < 3; ++b) {
    std::vector<double> w(grid.n);
    const Wavefunction& psi = state.branches[b];
    for (std::size_t j = 0; j < grid.n; ++j) w[j] = std::norm(psi[j]);
    cdfs[b] = sampling::cumulative(w);
    weight[b] = cdfs[b].back();
    if (weight[b] > 0.0) last_nonempty = b;
  }
  const double total = weight[0] + weight[1] + weight[2];
  if (!(total > 0.0)) throw std::invalid_argument("state has zero norm");

  sampling::UniformSource uniform(seed);
  std::vector<EventSample> events;
  events.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = uniform.next() * total;
    std::size_t b = last_nonempty;
    if (u < weight[0]) {
      b = 0;
    } else if (u < weight[0] + weight[1]) {
      b = 1;
    }
    if (!(weight[b] > 0.0)) b = last_nonempty;
    const double target = uniform.next() * weight[b];
    events.push_back({hilbert::outcome_for(state.basis, b),
                      sampling::invert_cdf(cdfs[b], target, grid.x_min, grid.dx())});
  }
  return events;
}

}  // namespace experiment
}  // namespace kickscope
