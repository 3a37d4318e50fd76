// Detector Hilbert-space algebra for imperfect which-way detection.
//
// The two detector states d1, d2 (overlap <d1|d2> = c e^{i theta}) are embedded
// in a three-dimensional space with orthonormal basis (q1, q2, q3):
//
//   d1 = alpha q1 + beta  q3
//   d2 = gamma q2 + delta q3
//
// A projective measurement in (q1, q2, q3) is an unambiguous discrimination of
// d1 and d2: q1 can only come from d1, q2 only from d2, q3 is the failure
// outcome. The coefficients below are the optimal choice, failure probability c.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <utility>

namespace kickscope {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

namespace hilbert {

/// Overlap <d1|d2> = c e^{i theta} between the two detector states.
struct DetectorConfig {
  double overlap_magnitude = 0.5;  // c in [0, 1]
  double overlap_phase = 0.0;      // theta in (-pi, pi]

  /// Throws std::domain_error if c or theta is out of range.
  void validate() const;
  Complex overlap() const { return std::polar(overlap_magnitude, overlap_phase); }
};

struct UqsdCoefficients {
  double alpha = 1.0;
  double gamma = 1.0;
  Complex beta{0.0, 0.0};
  Complex delta{0.0, 0.0};
};

/// Amplitudes over the orthonormal basis (q1, q2, q3).
using DetectorVector = std::array<Complex, 3>;
using Matrix3 = std::array<std::array<Complex, 3>, 3>;

enum class BasisKind { Computational, Symmetric, Tilted };

/// Orthonormal detector basis.
///   Computational: (q1, q2, q3)
///   Symmetric:     q+- = (q1 +- q2)/sqrt2, q3
///   Tilted(t'):    q+- = (q1 +- e^{i t'} q2)/sqrt2, q3
struct BasisChoice {
  BasisKind kind = BasisKind::Computational;
  double theta_prime = 0.0;

  static BasisChoice computational() { return {BasisKind::Computational, 0.0}; }
  static BasisChoice symmetric() { return {BasisKind::Symmetric, 0.0}; }
  static BasisChoice tilted(double theta_prime) { return {BasisKind::Tilted, theta_prime}; }

  std::string name() const;
};

/// Measurement outcome labels. Path1/Path2/Fail belong to the computational
/// basis, QPlus/QMinus/Q3 to the symmetric and tilted bases.
enum class Outcome { Path1, Path2, Fail, QPlus, QMinus, Q3 };

Outcome outcome_for(const BasisChoice& basis, std::size_t branch);
std::size_t branch_index(Outcome outcome);
bool outcome_belongs_to(Outcome outcome, const BasisChoice& basis);
std::string_view outcome_name(Outcome outcome);

/// Optimal coefficients: alpha = gamma = sqrt(1 - c), beta = sqrt(c) (real,
/// non-negative), delta = e^{i theta} beta.
UqsdCoefficients build_uqsd(const DetectorConfig& config);

/// d1 = (alpha, 0, beta), d2 = (0, gamma, delta).
std::pair<DetectorVector, DetectorVector> detector_states(const UqsdCoefficients& coeffs);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const DetectorVector& a, const DetectorVector& b);

/// Columns are the basis vectors written in computational coordinates.
Matrix3 basis_vectors(const BasisChoice& basis);

/// Coordinate transform: amplitudes in `from` -> amplitudes in `to`.
/// Entry (k, i) = <to_k | from_i>.
Matrix3 basis_matrix(const BasisChoice& from, const BasisChoice& to);

Matrix3 identity3();
Matrix3 multiply(const Matrix3& a, const Matrix3& b);
Matrix3 adjoint(const Matrix3& m);
double max_abs_difference(const Matrix3& a, const Matrix3& b);

}  // namespace hilbert
}  // namespace kickscope
