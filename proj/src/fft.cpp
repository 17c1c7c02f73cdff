#include "nok/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "nok/errors.hpp"

namespace nok {

namespace {
// FFTW planning is not thread-safe; execution through the new-array API is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int grid_points) : n_(grid_points) {
  if (n_ < 4 || (n_ & (n_ - 1)) != 0) {
    throw ParameterDomainError("grid_points must be a power of two >= 4");
  }
  std::lock_guard<std::mutex> lock(plan_mutex());
  real_buf_ = fftw_alloc_real(n_);
  fftw_complex* c = fftw_alloc_complex(n_ / 2 + 1);
  cplx_buf_ = c;
  fwd_plan_ = fftw_plan_dft_r2c_1d(n_, real_buf_, c, FFTW_ESTIMATE);
  bwd_plan_ = fftw_plan_dft_c2r_1d(n_, c, real_buf_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_plan_));
  fftw_free(real_buf_);
  fftw_free(static_cast<fftw_complex*>(cplx_buf_));
}

void RealFft::forward(const std::vector<double>& u,
                      std::vector<std::complex<double>>& hat) const {
  std::memcpy(real_buf_, u.data(), n_ * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(fwd_plan_));
  const fftw_complex* c = static_cast<const fftw_complex*>(cplx_buf_);
  hat.resize(modes());
  const double scale = 1.0 / n_;
  for (int k = 0; k < modes(); ++k) {
    hat[k] = std::complex<double>(c[k][0] * scale, c[k][1] * scale);
  }
}

void RealFft::inverse(const std::vector<std::complex<double>>& hat,
                      std::vector<double>& u) const {
  fftw_complex* c = static_cast<fftw_complex*>(cplx_buf_);
  for (int k = 0; k < modes(); ++k) {
    c[k][0] = hat[k].real();
    c[k][1] = hat[k].imag();
  }
  fftw_execute(static_cast<fftw_plan>(bwd_plan_));
  u.resize(n_);
  std::memcpy(u.data(), real_buf_, n_ * sizeof(double));
}

}  // namespace nok
