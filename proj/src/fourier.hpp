// Thin FFTW wrappers. Plans are built with FFTW_ESTIMATE so results do not
// depend on timing-based planner choices.
#pragma once

#include <span>
#include <vector>

#include "kickscope/hilbert.hpp"

namespace kickscope::fourier {

/// In place, unnormalized: X_k = sum_j x_j exp(-2 pi i j k / n).
void forward(std::span<Complex> data);
/// In place, unnormalized: x_j = sum_k X_k exp(+2 pi i j k / n).
void backward(std::span<Complex> data);

/// Circular cross-correlation r[L] = sum_k a[(k + L) mod n] * b[k].
std::vector<double> circular_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace kickscope::fourier
