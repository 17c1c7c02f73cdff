#ifndef NOK_ENERGY_HPP
#define NOK_ENERGY_HPP

#include <vector>

#include "nok/kernels.hpp"
#include "nok/parallel.hpp"

namespace nok {

// Parameters of the sharp-interface bubble energy
//   E_tot(N) = 2N + (2 gamma / pi) * F(N),
//   F(N) = sum_m (1/lambda(m N)) (sin(m pi omega)/m)^2.
struct EnergyParams {
  double gamma = 1.0;    // repulsion strength, > 0
  double omega = 0.3;    // relative volume, (0, 1/2]
  KernelSpec kernel;
  int truncation_m = 500;

  void validate() const;
};

struct RepulsionValue {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the dropped m > M remainder
};

struct EnergyBreakdown {
  double attraction = 0.0;  // 2N
  double repulsion = 0.0;   // (2 gamma / pi) F(N)
  double total = 0.0;
  double truncation_tail_bound = 0.0;  // in the same units as repulsion
};

struct SeriesLimit {
  double value = 0.0;
  bool decays_to_zero = false;  // F -> 0 because lambda is unbounded
};

// |u_hat_n|^2 of the equal-size equal-distance N-bubble step function:
// (1/pi^2)(N/n)^2 sin^2(n pi omega / N) when N | n, else 0.
double step_fourier_coeff_sq(long n, long big_n, double omega);

// F(N) truncated at params.truncation_m, with a reported tail bound.
// Continuum (real-valued) N >= 1 is supported.
RepulsionValue repulsion_f(double big_n, const EnergyParams& params);

// lim_{N->inf} F(N): lambda_inf^{-1} * pi*omega*(pi - pi*omega)/2 for kernels
// with a finite eigenvalue limit, else 0 (flagged).
SeriesLimit f_infinity(const EnergyParams& params);

EnergyBreakdown total_energy(double big_n, const EnergyParams& params);

// Forward difference F(N+1) - F(N) at integer N.
double delta_n_f(int big_n, const EnergyParams& params);

struct DeltaDerivative {
  double value = 0.0;              // analytic when available, else FD
  double finite_difference = 0.0;
  double analytic = 0.0;
  bool has_analytic = false;
  bool has_finite_difference = false;
};

// d/d delta of Delta_N F via central difference with step h; for the power
// and screened-Poisson kernels an analytic series is evaluated as well and
// cross-checked against the finite difference.
DeltaDerivative d_delta_of_delta_n_f(int big_n, const EnergyParams& params, double h);

// Delta_N F under the given kernel minus Delta_N F in the delta = 0 local
// limit (lambda = n^2).
double cumulative_delta_n_f(int big_n, const EnergyParams& params);

// Memo of lambda(n) at integer n for one kernel. Fill with ensure() before
// sharing read-only across threads.
class SpectrumTable {
 public:
  explicit SpectrumTable(const KernelSpec& kernel);

  void ensure(int n_max, Exec exec = Exec::Serial);
  int size() const { return static_cast<int>(values_.size()) - 1; }
  double operator()(int n) const { return values_[n]; }
  const KernelSpec& kernel() const { return kernel_; }

 private:
  KernelSpec kernel_;
  std::vector<double> values_;  // values_[n] = lambda(n), values_[0] = 0 or delta
};

// Integer-N fast path against a prefilled table (needs size >= M * N).
RepulsionValue repulsion_f(int big_n, const EnergyParams& params,
                           const SpectrumTable& table);

}  // namespace nok

#endif
