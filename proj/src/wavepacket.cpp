#include "kickscope/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fourier.hpp"
#include "kickscope/errors.hpp"

namespace kickscope::wavepacket {
namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("wavefunctions live on different grids");
}

// exp(-2 pi i m c) with the product reduced to a fraction of a turn before the
// trig call. The fma recovers the rounding error of m * c, so the phase stays
// accurate when m * c is many thousands of turns.
Complex turn_phase(double m, double c) {
  const double hi = m * c;
  const double lo = std::fma(m, c, -hi);
  const double frac = (hi - std::nearbyint(hi)) + lo;
  return std::polar(1.0, -2.0 * kPi * frac);
}

// exp(-i p_k x_min / hbar) for p_k = (k - n/2) dp; the argument is
// 2 pi (k - n/2) x_min / extent.
std::vector<Complex> origin_phases(const GridSpec& grid) {
  const std::size_t n = grid.n;
  const double turns_per_bin = grid.x_min / grid.extent();
  const double half = static_cast<double>(n / 2);
  std::vector<Complex> phases(n);
  for (std::size_t k = 0; k < n; ++k)
    phases[k] = turn_phase(static_cast<double>(k) - half, turns_per_bin);
  return phases;
}

void alternate_signs(std::span<Complex> data) {
  for (std::size_t j = 1; j < data.size(); j += 2) data[j] = -data[j];
}

}  // namespace

void SlitGeometry::validate() const {
  if (!(d > 0.0)) throw ConfigError("slit separation d must be > 0");
  if (!(sigma > 0.0)) throw ConfigError("slit width sigma must be > 0");
}

std::optional<std::string> SlitGeometry::narrow_slit_warning() const {
  if (sigma / d <= kNarrowSlitLimit) return std::nullopt;
  std::ostringstream os;
  os << "sigma/d = " << sigma / d << " exceeds the narrow-slit limit " << kNarrowSlitLimit
     << "; the slit-phase momentum-kick identity degrades";
  return os.str();
}

void PhysicalUnits::validate() const {
  if (!(hbar > 0.0)) throw ConfigError("hbar must be > 0");
  if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
  if (!(t >= 0.0)) throw ConfigError("propagation time t must be >= 0");
}

double PhysicalUnits::evolved_width(double sigma) const {
  const double spread = hbar * t / (2.0 * mass * sigma * sigma);
  return sigma * std::sqrt(1.0 + spread * spread);
}

void GridSpec::validate() const {
  if (n < 16 || (n & (n - 1)) != 0) {
    std::ostringstream os;
    os << "grid.n must be a power of two >= 16, got " << n;
    throw ConfigError(os.str());
  }
  if (!(x_max > x_min)) throw ConfigError("grid.x_max must exceed grid.x_min");
}

void GridSpec::validate_for(const SlitGeometry& geom, const PhysicalUnits& units) const {
  validate();
  geom.validate();
  units.validate();
  if (dx() > geom.sigma / 4.0) {
    std::ostringstream os;
    os << "grid too coarse: dx = " << dx() << " exceeds sigma/4 = " << geom.sigma / 4.0;
    throw ConfigError(os.str());
  }
  const double margin = kEnvelopeMargin * units.evolved_width(geom.sigma);
  if (x_min > -margin || x_max < geom.d + margin) {
    std::ostringstream os;
    os << "grid extent [" << x_min << ", " << x_max << "] does not contain [" << -margin << ", "
       << geom.d + margin << "] (evolved envelope would wrap around)";
    throw ConfigError(os.str());
  }
}

GridSpec GridSpec::centered(const SlitGeometry& geom, std::size_t n, double dx) {
  const double half = 0.5 * static_cast<double>(n) * dx;
  GridSpec g;
  g.n = n;
  g.x_min = 0.5 * geom.d - half;
  g.x_max = 0.5 * geom.d + half;
  return g;
}

Wavefunction::Wavefunction(GridSpec grid) : grid_(grid), amplitudes_(grid.n) {}

Wavefunction::Wavefunction(GridSpec grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.n)
    throw std::invalid_argument("amplitude count does not match grid size");
}

double Wavefunction::norm() const {
  double s = 0.0;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return s * grid_.dx();
}

Complex Wavefunction::inner(const Wavefunction& other) const {
  require_same_grid(grid_, other.grid_);
  Complex s{0.0, 0.0};
  for (std::size_t j = 0; j < amplitudes_.size(); ++j)
    s += std::conj(amplitudes_[j]) * other.amplitudes_[j];
  return s * grid_.dx();
}

double Wavefunction::distance(const Wavefunction& other) const {
  require_same_grid(grid_, other.grid_);
  double s = 0.0;
  for (std::size_t j = 0; j < amplitudes_.size(); ++j)
    s += std::norm(amplitudes_[j] - other.amplitudes_[j]);
  return std::sqrt(s * grid_.dx());
}

double Wavefunction::max_abs_difference(const Wavefunction& other) const {
  require_same_grid(grid_, other.grid_);
  double worst = 0.0;
  for (std::size_t j = 0; j < amplitudes_.size(); ++j)
    worst = std::max(worst, std::abs(amplitudes_[j] - other.amplitudes_[j]));
  return worst;
}

Wavefunction& Wavefunction::operator+=(const Wavefunction& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) amplitudes_[j] += other.amplitudes_[j];
  return *this;
}

Wavefunction& Wavefunction::operator-=(const Wavefunction& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) amplitudes_[j] -= other.amplitudes_[j];
  return *this;
}

Wavefunction& Wavefunction::operator*=(Complex scale) {
  for (Complex& a : amplitudes_) a *= scale;
  return *this;
}

Wavefunction operator+(Wavefunction a, const Wavefunction& b) { return a += b; }
Wavefunction operator-(Wavefunction a, const Wavefunction& b) { return a -= b; }
Wavefunction operator*(Complex scale, Wavefunction a) { return a *= scale; }

Wavefunction combine(Complex a, const Wavefunction& psi_a, Complex b, const Wavefunction& psi_b) {
  require_same_grid(psi_a.grid(), psi_b.grid());
  Wavefunction out(psi_a.grid());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a * psi_a[j] + b * psi_b[j];
  return out;
}

MomentumSpectrum::MomentumSpectrum(GridSpec grid, double hbar, std::vector<Complex> amplitudes)
    : grid_(grid), hbar_(hbar), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.n)
    throw std::invalid_argument("amplitude count does not match grid size");
}

double MomentumSpectrum::dp() const { return 2.0 * kPi * hbar_ / grid_.extent(); }

double MomentumSpectrum::p(std::size_t k) const {
  return (static_cast<double>(k) - static_cast<double>(grid_.n / 2)) * dp();
}

double MomentumSpectrum::norm() const {
  double s = 0.0;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return s * dp();
}

std::vector<double> MomentumSpectrum::density() const {
  std::vector<double> rho(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), rho.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return rho;
}

Wavefunction slit_state(const SlitGeometry& geom, const GridSpec& grid, Slit slit) {
  geom.validate();
  grid.validate();
  if (grid.dx() > geom.sigma / 4.0) {
    std::ostringstream os;
    os << "grid too coarse: dx = " << grid.dx() << " exceeds sigma/4 = " << geom.sigma / 4.0;
    throw ConfigError(os.str());
  }
  const double s2 = geom.sigma * geom.sigma;
  const double amp = std::pow(2.0 * kPi * s2, -0.25);
  const double xc = geom.center(slit);
  Wavefunction psi(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double u = grid.x(j) - xc;
    psi[j] = amp * std::exp(-u * u / (4.0 * s2));
  }
  return psi;
}

MomentumSpectrum to_momentum(const Wavefunction& psi, double hbar) {
  const GridSpec& grid = psi.grid();
  std::vector<Complex> data(psi.amplitudes().begin(), psi.amplitudes().end());
  alternate_signs(data);
  fourier::forward(data);
  const std::vector<Complex> phases = origin_phases(grid);
  const double scale = grid.dx() / std::sqrt(2.0 * kPi * hbar);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= scale * phases[k];
  return MomentumSpectrum(grid, hbar, std::move(data));
}

Wavefunction to_position(const MomentumSpectrum& phi) {
  const GridSpec& grid = phi.grid();
  std::vector<Complex> data(phi.amplitudes().begin(), phi.amplitudes().end());
  const std::vector<Complex> phases = origin_phases(grid);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= std::conj(phases[k]);
  fourier::backward(data);
  const double scale =
      std::sqrt(2.0 * kPi * phi.hbar()) / (static_cast<double>(grid.n) * grid.dx());
  for (std::size_t j = 0; j < data.size(); ++j) data[j] *= (j % 2 == 0) ? scale : -scale;
  return Wavefunction(grid, std::move(data));
}

Wavefunction propagate_fft(const Wavefunction& psi, const PhysicalUnits& units) {
  units.validate();
  if (units.t == 0.0) return psi;
  const GridSpec& grid = psi.grid();
  const std::size_t n = grid.n;
  // The origin phases of to_momentum/to_position cancel here, so only the
  // centered DFT is applied.
  std::vector<Complex> data(psi.amplitudes().begin(), psi.amplitudes().end());
  alternate_signs(data);
  fourier::forward(data);
  // p_k = m dp with m = k - n/2; kernel phase p^2 t / (2 m hbar) = m^2 * turns * 2 pi
  const double dp = 2.0 * kPi * units.hbar / grid.extent();
  const double turns = dp * dp * units.t / (2.0 * units.mass * units.hbar) / (2.0 * kPi);
  const double half = static_cast<double>(n / 2);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = static_cast<double>(k) - half;
    data[k] *= inv_n * turn_phase(m * m, turns);
  }
  fourier::backward(data);
  alternate_signs(data);
  Wavefunction out(grid, std::move(data));
  const double edge = boundary_weight(out);
  if (edge > 1e-10) {
    std::ostringstream os;
    os << "propagated state carries weight " << edge
       << " at the grid boundary (wraparound); enlarge the grid extent";
    throw ConfigError(os.str());
  }
  return out;
}

Wavefunction propagate_analytic(const SlitGeometry& geom, const GridSpec& grid,
                                const PhysicalUnits& units, Slit slit) {
  geom.validate();
  grid.validate();
  units.validate();
  const double s2 = geom.sigma * geom.sigma;
  const Complex b(s2, units.hbar * units.t / (2.0 * units.mass));
  const Complex prefactor = std::pow(2.0 * kPi * s2, -0.25) * std::sqrt(s2 / b);
  const Complex inv4b = 1.0 / (4.0 * b);
  const double xc = geom.center(slit);
  Wavefunction psi(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double u = grid.x(j) - xc;
    psi[j] = prefactor * std::exp(-u * u * inv4b);
  }
  return psi;
}

Wavefunction apply_kick(const Wavefunction& psi, double p, double hbar) {
  Wavefunction out = psi;
  if (p == 0.0) return out;
  const GridSpec& grid = psi.grid();
  const double turns_per_length = -p / (2.0 * kPi * hbar);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= turn_phase(grid.x(j), turns_per_length);
  return out;
}

double boundary_weight(const Wavefunction& psi) {
  const std::size_t n = psi.size();
  if (n == 0) return 0.0;
  const std::size_t band = std::max<std::size_t>(n / 64, 1);
  double total = 0.0;
  double edge = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(psi[j]);
    total += w;
    if (j < band || j >= n - band) edge += w;
  }
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace kickscope::wavepacket
