#include "kickscope/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kickscope::experiment {

using wavepacket::Slit;

std::array<double, 3> BranchState::probabilities() const {
  return {branches[0].norm(), branches[1].norm(), branches[2].norm()};
}

double BranchState::total_norm() const {
  const auto p = probabilities();
  return p[0] + p[1] + p[2];
}

const Wavefunction& BranchState::branch(Outcome outcome) const {
  if (!hilbert::outcome_belongs_to(outcome, basis)) {
    std::ostringstream os;
    os << "outcome " << hilbert::outcome_name(outcome) << " does not belong to the "
       << basis.name() << " basis";
    throw std::invalid_argument(os.str());
  }
  return branches[hilbert::branch_index(outcome)];
}

double ScreenPattern::integral() const {
  double s = 0.0;
  for (double v : density) s += v;
  return s * grid.dx();
}

FringeWindow FringeWindow::centered(const SlitGeometry& geom, const PhysicalUnits& units) {
  FringeWindow w;
  w.nominal_period = 2.0 * kPi * units.hbar * units.t / (units.mass * geom.d);
  w.reference_peak = 0.5 * geom.d;
  w.x_lo = w.reference_peak - w.nominal_period;
  w.x_hi = w.reference_peak + w.nominal_period;
  return w;
}

Wavefunction reference_state(const SlitGeometry& geom, const GridSpec& grid) {
  const double h = 1.0 / std::sqrt(2.0);
  return combine(h, wavepacket::slit_state(geom, grid, Slit::One), h,
                 wavepacket::slit_state(geom, grid, Slit::Two));
}

BranchState assemble(const SlitGeometry& geom, const GridSpec& grid,
                     const hilbert::UqsdCoefficients& coeffs) {
  const Wavefunction psi1 = wavepacket::slit_state(geom, grid, Slit::One);
  const Wavefunction psi2 = wavepacket::slit_state(geom, grid, Slit::Two);
  const double h = 1.0 / std::sqrt(2.0);
  BranchState s{BasisChoice::computational(), {}};
  s.branches[0] = Complex(coeffs.alpha * h, 0.0) * psi1;
  s.branches[1] = Complex(coeffs.gamma * h, 0.0) * psi2;
  s.branches[2] = combine(coeffs.beta * h, psi1, coeffs.delta * h, psi2);
  return s;
}

BranchState change_basis(const BranchState& state, const BasisChoice& to) {
  const hilbert::Matrix3 m = hilbert::basis_matrix(state.basis, to);
  const GridSpec& grid = state.grid();
  BranchState out{to, {Wavefunction(grid), Wavefunction(grid), Wavefunction(grid)}};
  for (std::size_t k = 0; k < 3; ++k) {
    Wavefunction& target = out.branches[k];
    for (std::size_t i = 0; i < 3; ++i) {
      const Complex coef = m[k][i];
      if (coef == Complex(0.0, 0.0)) continue;
      const Wavefunction& source = state.branches[i];
      for (std::size_t j = 0; j < grid.n; ++j) target[j] += coef * source[j];
    }
  }
  return out;
}

BranchState propagate_all(const BranchState& state, const PhysicalUnits& units) {
  BranchState out{state.basis, {}};
  for (std::size_t b = 0; b < 3; ++b)
    out.branches[b] = wavepacket::propagate_fft(state.branches[b], units);
  return out;
}

ScreenPattern screen_density(const BranchState& state) {
  const GridSpec& grid = state.grid();
  ScreenPattern pattern{grid, std::vector<double>(grid.n, 0.0)};
  for (std::size_t j = 0; j < grid.n; ++j) {
    // fixed summation order over branches
    pattern.density[j] = std::norm(state.branches[0][j]) + std::norm(state.branches[1][j]) +
                         std::norm(state.branches[2][j]);
  }
  return pattern;
}

ScreenPattern two_path_density(const Wavefunction& psi1, const Wavefunction& psi2,
                               Complex overlap) {
  const GridSpec& grid = psi1.grid();
  if (!(grid == psi2.grid())) throw std::invalid_argument("wavefunctions live on different grids");
  ScreenPattern pattern{grid, std::vector<double>(grid.n, 0.0)};
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double cross = (overlap * std::conj(psi1[j]) * psi2[j]).real();
    pattern.density[j] = 0.5 * (std::norm(psi1[j]) + std::norm(psi2[j]) + 2.0 * cross);
  }
  return pattern;
}

ConditionalPattern conditional_density(const BranchState& state, Outcome outcome) {
  const Wavefunction& psi = state.branch(outcome);
  ConditionalPattern result;
  result.probability = psi.norm();
  if (!(result.probability > 0.0)) return result;
  ScreenPattern pattern{psi.grid(), std::vector<double>(psi.size())};
  for (std::size_t j = 0; j < psi.size(); ++j)
    pattern.density[j] = std::norm(psi[j]) / result.probability;
  result.pattern = std::move(pattern);
  return result;
}

FringeAnalysis fringe_analysis(const ScreenPattern& pattern, const FringeWindow& window) {
  const GridSpec& grid = pattern.grid;
  if (!(window.x_hi > window.x_lo))
    throw std::invalid_argument("fringe window must satisfy x_lo < x_hi");
  if (window.x_lo < grid.x_min || window.x_hi > grid.x_max)
    throw std::invalid_argument("fringe window extends beyond the grid");
  const double dx = grid.dx();
  const auto lo = static_cast<std::size_t>(std::ceil((window.x_lo - grid.x_min) / dx));
  const auto hi = std::min(grid.n - 1,
                           static_cast<std::size_t>(std::floor((window.x_hi - grid.x_min) / dx)));
  if (hi < lo + 2) throw std::invalid_argument("fringe window spans fewer than 3 grid points");

  const std::vector<double>& rho = pattern.density;
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (rho[i] >= rho[i - 1] && rho[i] > rho[i + 1]) maxima.push_back(i);
    if (rho[i] <= rho[i - 1] && rho[i] < rho[i + 1]) minima.push_back(i);
  }

  FringeAnalysis fa;
  fa.analysis_window = {window.x_lo, window.x_hi};
  fa.fringe_period = window.nominal_period;

  const double center = 0.5 * (window.x_lo + window.x_hi);
  std::size_t peak = lo;
  if (maxima.empty()) {
    peak = static_cast<std::size_t>(std::max_element(rho.begin() + static_cast<long>(lo),
                                                     rho.begin() + static_cast<long>(hi) + 1) -
                                    rho.begin());
  } else {
    peak = *std::min_element(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(grid.x(a) - center) < std::abs(grid.x(b) - center);
    });
  }
  fa.central_peak = grid.x(peak);
  fa.central_fringe_shift = fa.central_peak - window.reference_peak;

  std::optional<std::size_t> left;
  std::optional<std::size_t> right;
  for (std::size_t m : minima) {
    if (m < peak) left = m;
    if (m > peak && !right) right = m;
  }
  if (!left && !right) return fa;

  double i_min = 0.0;
  if (left && right) {
    i_min = 0.5 * (rho[*left] + rho[*right]);
    fa.fringe_period = grid.x(*right) - grid.x(*left);
  } else {
    const std::size_t m = left ? *left : *right;
    i_min = rho[m];
    fa.fringe_period = 2.0 * std::abs(grid.x(m) - grid.x(peak));
  }
  const double i_max = rho[peak];
  fa.visibility = (i_max - i_min) / (i_max + i_min);
  fa.resolved = true;
  return fa;
}

double kick_identity_residual(const SlitGeometry& geom, const GridSpec& grid, double hbar) {
  const Wavefunction psi1 = wavepacket::slit_state(geom, grid, Slit::One);
  const Wavefunction psi2 = wavepacket::slit_state(geom, grid, Slit::Two);
  const double h = 1.0 / std::sqrt(2.0);
  const Wavefunction out_of_phase = combine(h, psi1, -h, psi2);
  const Wavefunction in_phase = combine(h, psi1, h, psi2);
  const double p0 = kPi * hbar / geom.d;
  return out_of_phase.distance(wavepacket::apply_kick(in_phase, p0, hbar));
}

double wrap_momentum(double p, double period) {
  double w = std::fmod(p, period);
  if (w < 0.0) w += period;
  return w;
}

double circular_distance(double a, double b, double period) {
  const double w = wrap_momentum(a - b, period);
  return std::min(w, period - w);
}

KickReport kick_report(const BranchState& state, const SlitGeometry& geom, double hbar,
                       const hilbert::DetectorConfig& detector) {
  if (state.basis.kind == hilbert::BasisKind::Computational)
    throw std::invalid_argument("kick_report needs a Symmetric or Tilted basis state");
  KickReport r;
  r.p0 = kPi * hbar / geom.d;
  r.p_e = detector.overlap_phase * hbar / geom.d;
  r.fk_theory = 0.5 * (1.0 - detector.overlap_magnitude);
  r.fk_branch = state.branches[1].norm();
  r.kick_identity_residual = kick_identity_residual(geom, state.grid(), hbar);
  const auto minus = wavepacket::to_momentum(state.branches[1], hbar);
  r.dp = minus.dp();
  if (r.fk_branch > 0.0) {
    const auto plus = wavepacket::to_momentum(state.branches[0], hbar);
    r.p0_measured = momentum_shift(minus.density(), plus.density(), r.dp,
                                   2.0 * kPi * hbar / geom.d);
  }
  return r;
}

double phase_kick_shift(const BranchState& state, const BranchState& reference,
                        const SlitGeometry& geom, double hbar) {
  if (state.basis.kind == hilbert::BasisKind::Computational ||
      reference.basis.kind == hilbert::BasisKind::Computational)
    throw std::invalid_argument("phase_kick_shift needs Symmetric basis states");
  if (!(state.branches[2].norm() > 0.0) || !(reference.branches[2].norm() > 0.0))
    throw std::invalid_argument("q3 branch is empty (c = 0); no phase kick to measure");
  const auto a = wavepacket::to_momentum(state.branches[2], hbar);
  const auto b = wavepacket::to_momentum(reference.branches[2], hbar);
  return momentum_shift(a.density(), b.density(), a.dp(), 2.0 * kPi * hbar / geom.d);
}

double tilted_relative_kick(const BranchState& state, double theta_prime,
                            const SlitGeometry& geom, double hbar) {
  const BranchState tilted = change_basis(state, BasisChoice::tilted(theta_prime));
  if (!(tilted.branches[1].norm() > 0.0))
    throw std::invalid_argument("q- branch is empty (c = 1); no relative kick");
  const auto minus = wavepacket::to_momentum(tilted.branches[1], hbar);
  const auto plus = wavepacket::to_momentum(tilted.branches[0], hbar);
  return momentum_shift(minus.density(), plus.density(), minus.dp(), 2.0 * kPi * hbar / geom.d);
}

std::pair<double, double> tilted_branch_shifts(const BranchState& state, double theta_prime,
                                               const Wavefunction& reference,
                                               const SlitGeometry& geom, double hbar) {
  const BranchState tilted = change_basis(state, BasisChoice::tilted(theta_prime));
  const auto ref = wavepacket::to_momentum(reference, hbar).density();
  const auto plus = wavepacket::to_momentum(tilted.branches[0], hbar);
  const auto minus = wavepacket::to_momentum(tilted.branches[1], hbar);
  const double period = 2.0 * kPi * hbar / geom.d;
  return {momentum_shift(plus.density(), ref, plus.dp(), period),
          momentum_shift(minus.density(), ref, minus.dp(), period)};
}

StoreyBound storey_bound_report(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::domain_error("visibility must lie in [0, 1]");
  StoreyBound s;
  s.lhs = kPi;
  s.rhs = 1.0 - visibility;
  s.satisfied = s.lhs >= s.rhs;
  return s;
}

}  // namespace kickscope::experiment
