#ifndef NOK_FFT_HPP
#define NOK_FFT_HPP

#include <complex>
#include <vector>

namespace nok {

// Real-to-halfcomplex transforms on a periodic grid of [0, 2pi), backed by
// FFTW with serial plans: forward() returns Fourier coefficients
// u_hat[n] = (1/J) sum_j u_j e^{-i n x_j} for n = 0..J/2, and inverse()
// reconstructs u_j = sum_n u_hat[n] e^{+i n x_j} with Hermitian completion.
class RealFft {
 public:
  explicit RealFft(int grid_points);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  int modes() const { return n_ / 2 + 1; }

  void forward(const std::vector<double>& u, std::vector<std::complex<double>>& hat) const;
  void inverse(const std::vector<std::complex<double>>& hat, std::vector<double>& u) const;

 private:
  int n_;
  double* real_buf_;
  void* cplx_buf_;
  void* fwd_plan_;
  void* bwd_plan_;
};

}  // namespace nok

#endif
