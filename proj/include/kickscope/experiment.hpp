// The entangled quanton-detector state and its observables: screen patterns,
// fringe visibility, kick fraction and magnitude, phase kicks, and Monte Carlo
// detection events.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kickscope/hilbert.hpp"
#include "kickscope/wavepacket.hpp"

namespace kickscope::experiment {

using hilbert::BasisChoice;
using hilbert::Outcome;
using wavepacket::GridSpec;
using wavepacket::PhysicalUnits;
using wavepacket::SlitGeometry;
using wavepacket::Wavefunction;

/// sum_b psi_b(x) |b>, one quanton wavefunction per orthonormal detector
/// basis vector of `basis`.
struct BranchState {
  BasisChoice basis;
  std::array<Wavefunction, 3> branches;

  const GridSpec& grid() const { return branches[0].grid(); }
  /// Branch norms <psi_b|psi_b>; these are the outcome probabilities.
  std::array<double, 3> probabilities() const;
  double total_norm() const;
  const Wavefunction& branch(Outcome outcome) const;
};

/// Real density on the position grid, units length^{-1}.
struct ScreenPattern {
  GridSpec grid;
  std::vector<double> density;

  /// sum rho dx
  double integral() const;
};

/// Region of the screen used for fringe extraction.
struct FringeWindow {
  double x_lo = 0.0;
  double x_hi = 0.0;
  /// Central-maximum position of the no-which-way-information pattern.
  double reference_peak = 0.0;
  /// Expected fringe spacing 2 pi hbar t / (m d).
  double nominal_period = 0.0;

  /// Centered at d/2, two nominal fringe periods wide.
  static FringeWindow centered(const SlitGeometry& geom, const PhysicalUnits& units);
};

struct FringeAnalysis {
  double visibility = 0.0;
  double fringe_period = 0.0;
  double central_fringe_shift = 0.0;
  double central_peak = 0.0;
  std::pair<double, double> analysis_window{0.0, 0.0};
  /// False when no minimum adjacent to the central maximum exists, i.e. the
  /// pattern shows no fringes at all; visibility is then 0.
  bool resolved = false;
};

struct KickReport {
  double p0 = 0.0;                     // pi hbar / d
  std::optional<double> p0_measured;   // empty when the q- branch is empty
  double fk_theory = 0.0;              // (1 - c) / 2
  double fk_branch = 0.0;              // norm of the q- branch
  double kick_identity_residual = 0.0;
  double p_e = 0.0;                    // theta hbar / d
  double dp = 0.0;                     // momentum bin width
};

struct StoreyBound {
  double lhs = 0.0;  // p0 d / hbar
  double rhs = 0.0;  // 1 - V
  bool satisfied = false;
};

struct ConditionalPattern {
  double probability = 0.0;
  /// Empty for a zero-probability branch.
  std::optional<ScreenPattern> pattern;
};

struct EventSample {
  Outcome outcome;
  double x;
};

/// (psi1 + psi2)/sqrt2: the quanton with no which-way detector.
Wavefunction reference_state(const SlitGeometry& geom, const GridSpec& grid);

/// Computational-basis branches: q1: (alpha/sqrt2) psi1, q2: (gamma/sqrt2) psi2,
/// q3: (beta psi1 + delta psi2)/sqrt2.
BranchState assemble(const SlitGeometry& geom, const GridSpec& grid,
                     const hilbert::UqsdCoefficients& coeffs);

/// Recombines the branch wavefunctions with hilbert::basis_matrix.
BranchState change_basis(const BranchState& state, const BasisChoice& to);

/// Propagates each branch independently; the detector states do not evolve.
BranchState propagate_all(const BranchState& state, const PhysicalUnits& units);

/// rho(x) = sum_b |psi_b(x)|^2.
ScreenPattern screen_density(const BranchState& state);

/// Two-path density with a detector overlap, evaluated directly:
///   (1/2)[|psi1|^2 + |psi2|^2 + 2 Re(overlap * conj(psi1) psi2)].
ScreenPattern two_path_density(const Wavefunction& psi1, const Wavefunction& psi2,
                               Complex overlap);

ConditionalPattern conditional_density(const BranchState& state, Outcome outcome);

/// Visibility from the central maximum and its adjacent minima inside the
/// window. Throws std::invalid_argument for a malformed window.
FringeAnalysis fringe_analysis(const ScreenPattern& pattern, const FringeWindow& window);

/// L2 distance between (psi1 - psi2)/sqrt2 and exp(i p0 x/hbar)(psi1 + psi2)/sqrt2,
/// p0 = pi hbar / d, evaluated at the slits.
double kick_identity_residual(const SlitGeometry& geom, const GridSpec& grid, double hbar = 1.0);

/// Momentum shift s such that density a(p) best matches b(p - s), taken as the
/// cross-correlation argmax over lags in one fringe period [0, 2 pi hbar / d).
/// Result lies in [0, 2 pi hbar / d).
double momentum_shift(const std::vector<double>& a, const std::vector<double>& b, double dp,
                      double period);

/// Wrap a momentum into [0, period).
double wrap_momentum(double p, double period);
/// Distance between two momenta modulo period.
double circular_distance(double a, double b, double period);

/// Kick observables of a Symmetric- or Tilted-basis state. Momentum densities are
/// taken from the state as given (pass the state at the slits).
KickReport kick_report(const BranchState& state, const SlitGeometry& geom, double hbar,
                       const hilbert::DetectorConfig& detector);

/// Shift of the q3-branch momentum density of `state` relative to that of
/// `reference` (same configuration with theta = 0). Both in Symmetric basis.
double phase_kick_shift(const BranchState& state, const BranchState& reference,
                        const SlitGeometry& geom, double hbar);

/// Relative momentum shift between the q- and q+ branches after changing to
/// the Tilted(theta_prime) basis.
double tilted_relative_kick(const BranchState& state, double theta_prime,
                            const SlitGeometry& geom, double hbar);

/// Shifts of the Tilted(theta_prime) q+ and q- branch densities relative to
/// the no-detector reference state.
std::pair<double, double> tilted_branch_shifts(const BranchState& state, double theta_prime,
                                               const Wavefunction& reference,
                                               const SlitGeometry& geom, double hbar);

StoreyBound storey_bound_report(double visibility);

/// Draws `count` detection events: outcome by branch probability, then x by
/// inverse CDF over that branch's conditional density (piecewise constant per
/// grid cell, linear CDF inside a cell). Deterministic for a given seed.
std::vector<EventSample> sample_events(const BranchState& state, std::size_t count,
                                       std::uint64_t seed);

}  // namespace kickscope::experiment
