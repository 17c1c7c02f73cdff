#ifndef NOK_KERNELS_HPP
#define NOK_KERNELS_HPP

#include <string>

namespace nok {

enum class KernelFamily {
  PowerAlpha,       // rho(xi) = (3-alpha)/xi^alpha on (0,1), alpha in (0,3)\{1}
  Constant,         // rho(xi) = 3 (the alpha -> 0 degenerate power kernel)
  Gauss,            // rho(xi) = (2/sqrt(pi)) exp(-xi^2)
  ScreenedPoisson,  // delta*I - Laplacian; delta is a screening constant
  LocalLaplacian,   // -Laplacian, the delta -> 0 local limit
};

const char* family_name(KernelFamily family);

// A nonlocal operator choice: family plus horizon delta. For ScreenedPoisson
// delta is the screening constant (>= 0); LocalLaplacian ignores it.
struct KernelSpec {
  KernelFamily family = KernelFamily::Constant;
  double alpha = 0.0;
  double delta = 0.5;

  static KernelSpec power(double alpha, double delta);
  static KernelSpec constant(double delta);
  static KernelSpec gauss(double delta);
  static KernelSpec screened_poisson(double delta);
  static KernelSpec local_laplacian();

  // Throws ParameterDomainError on invalid parameters.
  void validate() const;

  // lambda(n) has a finite limit as n -> infinity.
  bool has_finite_limit() const;
  // lambda(n) is strictly increasing in n.
  bool monotone_increasing() const;

  std::string describe() const;
};

struct EigenvalueLimit {
  bool finite = false;
  double value = 0.0;  // meaningful only when finite
};

enum class KernelCase { I, II, III, IV, MonotoneLocal };

const char* case_name(KernelCase c);

// Eigenvalue lambda_delta(n) of the operator on mode e^{inx}, n >= 0 real.
double eigenvalue(const KernelSpec& kernel, double n);

// lim_{n->inf} lambda_delta(n), when it exists.
EigenvalueLimit eigenvalue_limit(const KernelSpec& kernel);

// K(x) = int_0^1 (1 - cos(x*xi)) / xi^alpha dxi, alpha in (0,3).
double k_integral(double x, double alpha);

// f(x) = int_0^x cos(t) / t^alpha dt, alpha in (0,1).
double cos_power_integral(double x, double alpha);

// Critical exponent: root of cos_power_integral(3*pi/2, alpha) = 0,
// found by bisection on [0.2, 0.4] to the given tolerance.
double alpha_star(double tol);

// alpha_star(1e-8), computed once and memoized (thread-safe).
double alpha_star_cached();

KernelCase classify(const KernelSpec& kernel);

struct ArgmaxResult {
  bool bounded = false;  // a finite n attains the global max of lambda
  int n_at_max = 0;      // first attaining integer, when bounded
  double lambda_max = 0.0;
};

// Scans lambda over n = 1..n_max and reports whether the discrete spectrum
// attains a maximum strictly above lambda(inf). Monotone kernels short-circuit
// to unbounded.
ArgmaxResult discrete_lambda_argmax(const KernelSpec& kernel, int n_max);

// max(500, ceil(20*pi/delta)): covers at least ten oscillation periods.
int default_argmax_scan_cap(const KernelSpec& kernel);

// A rigorous lower bound for inf_{n >= n0} lambda(n), used by series
// truncation tails. Returns 0 when no positive bound is available.
double lambda_tail_lower_bound(const KernelSpec& kernel, double n0);

}  // namespace nok

#endif
