// Quanton wavefunctions on a uniform 1-D grid: slit states, free propagation
// (spectral and closed form), momentum representation and momentum kicks.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kickscope/hilbert.hpp"

namespace kickscope::wavepacket {

enum class Slit { One = 1, Two = 2 };

/// Two slits: slit 1 centered at x = 0, slit 2 at x = d. Each slit emits a
/// Gaussian of position standard deviation sigma.
struct SlitGeometry {
  double d = 1.0;
  double sigma = 0.01;

  static constexpr double kNarrowSlitLimit = 0.05;

  void validate() const;
  /// Set when sigma/d exceeds the narrow-slit regime.
  std::optional<std::string> narrow_slit_warning() const;
  double center(Slit slit) const { return slit == Slit::One ? 0.0 : d; }
};

struct PhysicalUnits {
  double hbar = 1.0;
  double mass = 1.0;
  double t = 5.0;

  void validate() const;
  /// Position standard deviation of a free Gaussian of initial width sigma
  /// after time t: sigma * sqrt(1 + (hbar t / (2 m sigma^2))^2).
  double evolved_width(double sigma) const;
};

/// n points x_j = x_min + j dx, j = 0..n-1, dx = (x_max - x_min)/n. The grid is
/// treated as periodic by the spectral routines.
struct GridSpec {
  std::size_t n = std::size_t{1} << 21;
  double x_min = -2620.94;
  double x_max = 2621.94;

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }
  double extent() const { return x_max - x_min; }

  /// n a power of two, n >= 16, x_max > x_min.
  void validate() const;
  /// Grid invariants relative to the slit geometry at propagation time t:
  /// dx <= sigma/4, and the extent covers both slits padded by
  /// kEnvelopeMargin evolved widths on either side.
  void validate_for(const SlitGeometry& geom, const PhysicalUnits& units) const;

  static constexpr double kEnvelopeMargin = 8.0;

  /// Grid of n points with spacing dx centered on the slit midpoint.
  static GridSpec centered(const SlitGeometry& geom, std::size_t n, double dx);

  bool operator==(const GridSpec&) const = default;
};

/// Complex amplitudes on a grid, units length^{-1/2}.
class Wavefunction {
 public:
  Wavefunction() = default;
  explicit Wavefunction(GridSpec grid);
  Wavefunction(GridSpec grid, std::vector<Complex> amplitudes);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  const Complex& operator[](std::size_t j) const { return amplitudes_[j]; }
  Complex& operator[](std::size_t j) { return amplitudes_[j]; }

  /// sum |psi|^2 dx
  double norm() const;
  /// sum conj(this) * other * dx
  Complex inner(const Wavefunction& other) const;
  /// sqrt(sum |this - other|^2 dx)
  double distance(const Wavefunction& other) const;
  double max_abs_difference(const Wavefunction& other) const;

  Wavefunction& operator+=(const Wavefunction& other);
  Wavefunction& operator-=(const Wavefunction& other);
  Wavefunction& operator*=(Complex scale);

 private:
  GridSpec grid_;
  std::vector<Complex> amplitudes_;
};

Wavefunction operator+(Wavefunction a, const Wavefunction& b);
Wavefunction operator-(Wavefunction a, const Wavefunction& b);
Wavefunction operator*(Complex scale, Wavefunction a);

/// a * psi_a + b * psi_b
Wavefunction combine(Complex a, const Wavefunction& psi_a, Complex b, const Wavefunction& psi_b);

/// Momentum-space amplitudes on p_k = (k - n/2) dp, dp = 2 pi hbar / (n dx),
/// units momentum^{-1/2}.
class MomentumSpectrum {
 public:
  MomentumSpectrum(GridSpec grid, double hbar, std::vector<Complex> amplitudes);

  const GridSpec& grid() const { return grid_; }
  double hbar() const { return hbar_; }
  std::size_t size() const { return amplitudes_.size(); }
  double dp() const;
  double p(std::size_t k) const;
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t k) const { return amplitudes_[k]; }

  /// sum |Phi|^2 dp
  double norm() const;
  /// |Phi(p_k)|^2
  std::vector<double> density() const;

 private:
  GridSpec grid_;
  double hbar_;
  std::vector<Complex> amplitudes_;
};

/// Normalized Gaussian (2 pi sigma^2)^{-1/4} exp(-(x - x_c)^2 / (4 sigma^2)).
Wavefunction slit_state(const SlitGeometry& geom, const GridSpec& grid, Slit slit);

/// Phi(p_k) = dx / sqrt(2 pi hbar) * sum_j psi(x_j) exp(-i p_k x_j / hbar).
MomentumSpectrum to_momentum(const Wavefunction& psi, double hbar);
/// Exact inverse of to_momentum.
Wavefunction to_position(const MomentumSpectrum& phi);

/// Free evolution by multiplying momentum amplitudes with
/// exp(-i p^2 t / (2 m hbar)). Throws ConfigError if the evolved state reaches
/// the periodic boundary.
Wavefunction propagate_fft(const Wavefunction& psi, const PhysicalUnits& units);

/// Closed-form free evolution of a slit Gaussian:
///   psi(x, t) = (2 pi sigma^2)^{-1/4} sqrt(sigma^2 / B) exp(-(x - x_c)^2 / (4 B)),
///   B = sigma^2 + i hbar t / (2 m).
Wavefunction propagate_analytic(const SlitGeometry& geom, const GridSpec& grid,
                                const PhysicalUnits& units, Slit slit);

/// psi(x) -> exp(i p x / hbar) psi(x).
Wavefunction apply_kick(const Wavefunction& psi, double p, double hbar);

/// Fraction of sum |psi|^2 carried by the outer n/64 points at each end.
double boundary_weight(const Wavefunction& psi);

}  // namespace kickscope::wavepacket
