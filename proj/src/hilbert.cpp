#include "kickscope/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kickscope::hilbert {

void DetectorConfig::validate() const {
  if (!(overlap_magnitude >= 0.0 && overlap_magnitude <= 1.0)) {
    std::ostringstream os;
    os << "detector overlap magnitude c must lie in [0, 1], got " << overlap_magnitude;
    throw std::domain_error(os.str());
  }
  if (!(overlap_phase > -kPi && overlap_phase <= kPi)) {
    std::ostringstream os;
    os << "detector overlap phase theta must lie in (-pi, pi], got " << overlap_phase;
    throw std::domain_error(os.str());
  }
}

std::string BasisChoice::name() const {
  switch (kind) {
    case BasisKind::Computational:
      return "computational";
    case BasisKind::Symmetric:
      return "symmetric";
    case BasisKind::Tilted: {
      std::ostringstream os;
      os.precision(17);
      os << "tilted:" << theta_prime;
      return os.str();
    }
  }
  return {};
}

Outcome outcome_for(const BasisChoice& basis, std::size_t branch) {
  if (branch > 2) throw std::out_of_range("detector branch index must be 0, 1 or 2");
  if (basis.kind == BasisKind::Computational) {
    constexpr std::array<Outcome, 3> labels{Outcome::Path1, Outcome::Path2, Outcome::Fail};
    return labels[branch];
  }
  constexpr std::array<Outcome, 3> labels{Outcome::QPlus, Outcome::QMinus, Outcome::Q3};
  return labels[branch];
}

std::size_t branch_index(Outcome outcome) {
  switch (outcome) {
    case Outcome::Path1:
    case Outcome::QPlus:
      return 0;
    case Outcome::Path2:
    case Outcome::QMinus:
      return 1;
    case Outcome::Fail:
    case Outcome::Q3:
      return 2;
  }
  return 2;
}

bool outcome_belongs_to(Outcome outcome, const BasisChoice& basis) {
  return outcome_for(basis, branch_index(outcome)) == outcome;
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Path1: return "Path1";
    case Outcome::Path2: return "Path2";
    case Outcome::Fail: return "Fail";
    case Outcome::QPlus: return "QPlus";
    case Outcome::QMinus: return "QMinus";
    case Outcome::Q3: return "Q3";
  }
  return "?";
}

UqsdCoefficients build_uqsd(const DetectorConfig& config) {
  config.validate();
  const double c = config.overlap_magnitude;
  UqsdCoefficients k;
  k.alpha = std::sqrt(1.0 - c);
  k.gamma = k.alpha;
  k.beta = Complex(std::sqrt(c), 0.0);
  k.delta = std::polar(std::sqrt(c), config.overlap_phase);
  return k;
}

std::pair<DetectorVector, DetectorVector> detector_states(const UqsdCoefficients& coeffs) {
  DetectorVector d1{Complex(coeffs.alpha, 0.0), Complex(0.0, 0.0), coeffs.beta};
  DetectorVector d2{Complex(0.0, 0.0), Complex(coeffs.gamma, 0.0), coeffs.delta};
  return {d1, d2};
}

Complex inner(const DetectorVector& a, const DetectorVector& b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < 3; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

Matrix3 basis_vectors(const BasisChoice& basis) {
  Matrix3 v{};
  v[2][2] = 1.0;
  if (basis.kind == BasisKind::Computational) {
    v[0][0] = 1.0;
    v[1][1] = 1.0;
    return v;
  }
  const double h = 1.0 / std::sqrt(2.0);
  const Complex phase = basis.kind == BasisKind::Tilted ? std::polar(1.0, basis.theta_prime)
                                                        : Complex(1.0, 0.0);
  // column 0: q+, column 1: q-
  v[0][0] = h;
  v[1][0] = h * phase;
  v[0][1] = h;
  v[1][1] = -h * phase;
  return v;
}

Matrix3 basis_matrix(const BasisChoice& from, const BasisChoice& to) {
  return multiply(adjoint(basis_vectors(to)), basis_vectors(from));
}

Matrix3 identity3() {
  Matrix3 m{};
  for (std::size_t i = 0; i < 3; ++i) m[i][i] = 1.0;
  return m;
}

Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 m{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) m[i][j] += a[i][k] * b[k][j];
  return m;
}

Matrix3 adjoint(const Matrix3& m) {
  Matrix3 r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i][j] = std::conj(m[j][i]);
  return r;
}

double max_abs_difference(const Matrix3& a, const Matrix3& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

}  // namespace kickscope::hilbert
