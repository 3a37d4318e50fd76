#include "fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace kickscope::fourier {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct BufferDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

void transform(std::span<Complex> data, int sign) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  Plan plan(fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("FFTW failed to create a plan");
  fftw_execute(plan.get());
}

}  // namespace

void forward(std::span<Complex> data) { transform(data, FFTW_FORWARD); }
void backward(std::span<Complex> data) { transform(data, FFTW_BACKWARD); }

std::vector<double> circular_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("correlation inputs differ in length");
  const std::size_t n = a.size();
  const std::size_t half = n / 2 + 1;
  const int ni = static_cast<int>(n);

  std::unique_ptr<double, BufferDeleter> real(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, BufferDeleter> fa(fftw_alloc_complex(half));
  std::unique_ptr<fftw_complex, BufferDeleter> fb(fftw_alloc_complex(half));

  Plan ra(fftw_plan_dft_r2c_1d(ni, real.get(), fa.get(), FFTW_ESTIMATE));
  Plan rb(fftw_plan_dft_r2c_1d(ni, real.get(), fb.get(), FFTW_ESTIMATE));
  Plan back(fftw_plan_dft_c2r_1d(ni, fa.get(), real.get(), FFTW_ESTIMATE));
  if (!ra || !rb || !back) throw std::runtime_error("FFTW failed to create a plan");

  std::copy(a.begin(), a.end(), real.get());
  fftw_execute(ra.get());
  std::copy(b.begin(), b.end(), real.get());
  fftw_execute(rb.get());

  // A * conj(B)
  for (std::size_t k = 0; k < half; ++k) {
    const Complex za(fa.get()[k][0], fa.get()[k][1]);
    const Complex zb(fb.get()[k][0], fb.get()[k][1]);
    const Complex z = za * std::conj(zb);
    fa.get()[k][0] = z.real();
    fa.get()[k][1] = z.imag();
  }
  fftw_execute(back.get());

  std::vector<double> r(real.get(), real.get() + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : r) v *= scale;
  return r;
}

}  // namespace kickscope::fourier
