#include "nok/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "nok/errors.hpp"
#include "nok/quadrature.hpp"

namespace nok {

namespace {

constexpr double kPi = std::numbers::pi;

// Quadrature panels switch to a closed-form tail treatment beyond this
// argument; oscillatory panel-by-panel integration below it.
constexpr double kAsymptoticCutoff = 60.0;
constexpr double kQuadRelTol = 1e-12;

// sum_{k>=1} (-1)^{k+1} t^(2k+1-a) / ((2k)! (2k+1-a)),
// the series form of int_0^t (1-cos s)/s^a ds for t <= 1.
double one_minus_cos_series(double t, double a) {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  double fact = 1.0;  // (2k)!
  double tpow = std::pow(t, 3.0 - a);
  const double t2 = t * t;
  for (int k = 1; k <= 40; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = (k % 2 == 1 ? 1.0 : -1.0) * tpow / (fact * (2.0 * k + 1.0 - a));
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum) + 1e-300) break;
    tpow *= t2;
  }
  return sum;
}

// sum_{k>=0} (-1)^k t^(2k+1-a) / ((2k)! (2k+1-a)),
// the series form of int_0^t cos(s)/s^a ds for t <= 1, a in (0,1).
double cos_over_power_series(double t, double a) {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  double fact = 1.0;
  double tpow = std::pow(t, 1.0 - a);
  const double t2 = t * t;
  for (int k = 0; k <= 40; ++k) {
    if (k > 0) fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * tpow / (fact * (2.0 * k + 1.0 - a));
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum) + 1e-300) break;
    tpow *= t2;
  }
  return sum;
}

// int_x^inf cos(t) t^(-b) dt by repeated integration by parts (asymptotic,
// valid for x >= kAsymptoticCutoff; truncation far below double precision
// there).
double cos_tail(double x, double b) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  double value = 0.0;
  double coeff = 1.0;
  double xpow = std::pow(x, -b);
  double beta = b;
  for (int level = 0; level < 6; ++level) {
    value += coeff * (-s * xpow + beta * c * xpow / x);
    coeff *= -beta * (beta + 1.0);
    xpow /= x * x;
    beta += 2.0;
  }
  return value;
}

// Integrates f over [lo, hi] with fixed half-pi panels, each refined
// adaptively; the final partial panel is a single GK15 evaluation so the
// result stays smooth in the upper limit.
template <typename F>
double oscillatory_panels(F&& f, double lo, double hi) {
  constexpr double kPanel = kPi / 2.0;
  double total = 0.0;
  double a = lo;
  while (a + kPanel <= hi) {
    total += quad::adaptive(f, a, a + kPanel, kQuadRelTol, 1e-300).value;
    a += kPanel;
  }
  if (hi > a) total += quad::gk15(f, a, hi).value;
  return total;
}

// int_0^x (1 - cos t)/t^a dt for a in (0,3), any x >= 0.
double one_minus_cos_integral(double x, double a) {
  if (x <= 0.0) return 0.0;
  if (x < kAsymptoticCutoff) {
    const double t0 = std::min(x, 1.0);
    double value = one_minus_cos_series(t0, a);
    if (x > t0) {
      value += oscillatory_panels(
          [a](double t) { return (1.0 - std::cos(t)) / std::pow(t, a); }, t0, x);
    }
    return value;
  }
  if (a < 1.0) {
    // int_0^inf cos(t)/t^a dt = Gamma(1-a) sin(pi a / 2)
    const double cos_full = std::tgamma(1.0 - a) * std::sin(0.5 * kPi * a);
    return std::pow(x, 1.0 - a) / (1.0 - a) - cos_full + cos_tail(x, a);
  }
  // a in (1,3): int_0^inf (1-cos t)/t^a dt, written in a form regular at a=2.
  const double e = a - 2.0;
  const double half_pi_e = 0.5 * kPi * e;
  const double sinc_e = (std::fabs(half_pi_e) < 1e-8)
                            ? 1.0 - half_pi_e * half_pi_e / 6.0
                            : std::sin(half_pi_e) / half_pi_e;
  const double full = std::tgamma(1.0 - e) * (0.5 * kPi) * sinc_e / (1.0 + e);
  return full - std::pow(x, 1.0 - a) / (a - 1.0) + cos_tail(x, a);
}

// 1 - sinc(x) with a series branch against cancellation near 0.
double one_minus_sinc(double x) {
  const double ax = std::fabs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return 1.0 - std::sin(x) / x;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ParameterDomainError(msg);
}

}  // namespace

const char* family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::PowerAlpha: return "power";
    case KernelFamily::Constant: return "constant";
    case KernelFamily::Gauss: return "gauss";
    case KernelFamily::ScreenedPoisson: return "screened";
    case KernelFamily::LocalLaplacian: return "laplacian";
  }
  return "?";
}

const char* case_name(KernelCase c) {
  switch (c) {
    case KernelCase::I: return "I";
    case KernelCase::II: return "II";
    case KernelCase::III: return "III";
    case KernelCase::IV: return "IV";
    case KernelCase::MonotoneLocal: return "MonotoneLocal";
  }
  return "?";
}

KernelSpec KernelSpec::power(double alpha, double delta) {
  KernelSpec k{KernelFamily::PowerAlpha, alpha, delta};
  k.validate();
  return k;
}

KernelSpec KernelSpec::constant(double delta) {
  KernelSpec k{KernelFamily::Constant, 0.0, delta};
  k.validate();
  return k;
}

KernelSpec KernelSpec::gauss(double delta) {
  KernelSpec k{KernelFamily::Gauss, 0.0, delta};
  k.validate();
  return k;
}

KernelSpec KernelSpec::screened_poisson(double delta) {
  KernelSpec k{KernelFamily::ScreenedPoisson, 0.0, delta};
  k.validate();
  return k;
}

KernelSpec KernelSpec::local_laplacian() {
  return KernelSpec{KernelFamily::LocalLaplacian, 0.0, 0.0};
}

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::PowerAlpha:
      require(alpha > 0.0 && alpha < 3.0, "power kernel needs alpha in (0,3)");
      require(alpha != 1.0, "alpha = 1 is excluded (eigenvalue formula degenerates)");
      require(delta > 0.0 && delta <= kPi, "horizon delta must lie in (0, pi]");
      break;
    case KernelFamily::Constant:
    case KernelFamily::Gauss:
      require(delta > 0.0 && delta <= kPi, "horizon delta must lie in (0, pi]");
      break;
    case KernelFamily::ScreenedPoisson:
      require(delta >= 0.0, "screening constant must be >= 0");
      break;
    case KernelFamily::LocalLaplacian:
      break;
  }
}

bool KernelSpec::has_finite_limit() const {
  switch (family) {
    case KernelFamily::PowerAlpha: return alpha < 1.0;
    case KernelFamily::Constant: return true;
    case KernelFamily::Gauss: return true;
    default: return false;
  }
}

bool KernelSpec::monotone_increasing() const {
  switch (family) {
    case KernelFamily::PowerAlpha: return alpha > 1.0;
    case KernelFamily::Gauss: return true;
    case KernelFamily::ScreenedPoisson: return true;
    case KernelFamily::LocalLaplacian: return true;
    default: return false;
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os << family_name(family);
  if (family == KernelFamily::PowerAlpha) os << "(alpha=" << alpha << ")";
  if (family != KernelFamily::LocalLaplacian) os << " delta=" << delta;
  return os.str();
}

double eigenvalue(const KernelSpec& kernel, double n) {
  kernel.validate();
  require(n >= 0.0, "mode number n must be >= 0");
  switch (kernel.family) {
    case KernelFamily::PowerAlpha: {
      if (n == 0.0) return 0.0;
      const double x = n * kernel.delta;
      const double core = one_minus_cos_integral(x, kernel.alpha);
      return 2.0 * (3.0 - kernel.alpha) *
             std::pow(kernel.delta, kernel.alpha - 3.0) *
             std::pow(n, kernel.alpha - 1.0) * core;
    }
    case KernelFamily::Constant: {
      const double x = n * kernel.delta;
      return 6.0 / (kernel.delta * kernel.delta) * one_minus_sinc(x);
    }
    case KernelFamily::Gauss: {
      const double x = n * kernel.delta;
      return 4.0 / (kernel.delta * kernel.delta) * (-std::expm1(-0.25 * x * x));
    }
    case KernelFamily::ScreenedPoisson:
      return kernel.delta + n * n;
    case KernelFamily::LocalLaplacian:
      return n * n;
  }
  return 0.0;
}

EigenvalueLimit eigenvalue_limit(const KernelSpec& kernel) {
  kernel.validate();
  switch (kernel.family) {
    case KernelFamily::PowerAlpha:
      if (kernel.alpha < 1.0) {
        return {true, 2.0 * (3.0 - kernel.alpha) /
                          (kernel.delta * kernel.delta * (1.0 - kernel.alpha))};
      }
      return {false, 0.0};
    case KernelFamily::Constant:
      return {true, 6.0 / (kernel.delta * kernel.delta)};
    case KernelFamily::Gauss:
      return {true, 4.0 / (kernel.delta * kernel.delta)};
    default:
      return {false, 0.0};
  }
}

double k_integral(double x, double alpha) {
  require(alpha > 0.0 && alpha < 3.0, "k_integral needs alpha in (0,3)");
  require(x >= 0.0, "k_integral needs x >= 0");
  if (x == 0.0) return 0.0;
  return std::pow(x, alpha - 1.0) * one_minus_cos_integral(x, alpha);
}

double cos_power_integral(double x, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "cos_power_integral needs alpha in (0,1)");
  require(x >= 0.0, "cos_power_integral needs x >= 0");
  if (x == 0.0) return 0.0;
  const double t0 = std::min(x, 1.0);
  double value = cos_over_power_series(t0, alpha);
  if (x > t0) {
    value += oscillatory_panels(
        [alpha](double t) { return std::cos(t) / std::pow(t, alpha); }, t0, x);
  }
  return value;
}

double alpha_star(double tol) {
  require(tol > 0.0, "alpha_star needs tol > 0");
  const double x = 1.5 * kPi;
  double lo = 0.2;
  double hi = 0.4;
  double g_lo = cos_power_integral(x, lo);
  double g_hi = cos_power_integral(x, hi);
  if (!(g_lo < 0.0 && g_hi > 0.0)) {
    throw InternalConsistencyError("alpha_star bracket [0.2,0.4] does not straddle a sign change");
  }
  while (0.5 * (hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = cos_power_integral(x, mid);
    if (g_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double alpha_star_cached() {
  static double value = 0.0;
  static std::once_flag flag;
  std::call_once(flag, [] { value = alpha_star(1e-8); });
  return value;
}

KernelCase classify(const KernelSpec& kernel) {
  kernel.validate();
  switch (kernel.family) {
    case KernelFamily::Constant:
      return KernelCase::I;
    case KernelFamily::PowerAlpha: {
      if (kernel.alpha > 1.0) return KernelCase::IV;
      return kernel.alpha < alpha_star_cached() ? KernelCase::II : KernelCase::III;
    }
    default:
      return KernelCase::MonotoneLocal;
  }
}

ArgmaxResult discrete_lambda_argmax(const KernelSpec& kernel, int n_max) {
  kernel.validate();
  require(n_max >= 1, "discrete_lambda_argmax needs n_max >= 1");
  const KernelCase c = classify(kernel);
  if (c == KernelCase::IV || c == KernelCase::MonotoneLocal) {
    return {false, 0, 0.0};
  }
  double best = -1.0;
  int best_n = 0;
  for (int n = 1; n <= n_max; ++n) {
    const double lam = eigenvalue(kernel, static_cast<double>(n));
    if (lam > best) {
      best = lam;
      best_n = n;
    }
  }
  const EigenvalueLimit limit = eigenvalue_limit(kernel);
  if (limit.finite && best > limit.value) {
    return {true, best_n, best};
  }
  return {false, 0, best};
}

int default_argmax_scan_cap(const KernelSpec& kernel) {
  if (kernel.family == KernelFamily::ScreenedPoisson ||
      kernel.family == KernelFamily::LocalLaplacian || kernel.delta <= 0.0) {
    return 500;
  }
  return std::max(500, static_cast<int>(std::ceil(20.0 * kPi / kernel.delta)));
}

double lambda_tail_lower_bound(const KernelSpec& kernel, double n0) {
  kernel.validate();
  if (n0 <= 0.0) return 0.0;
  if (kernel.monotone_increasing() || kernel.family == KernelFamily::Gauss) {
    return eigenvalue(kernel, n0);
  }
  if (kernel.family == KernelFamily::Constant) {
    const double x0 = n0 * kernel.delta;
    // sup_{x >= x0} sinc(x) <= 1/x0 past pi, sinc(x0) before (plus the 1/pi
    // envelope for the tail).
    double sup;
    if (x0 >= kPi) {
      sup = 1.0 / x0;
    } else {
      sup = std::max(1.0 - one_minus_sinc(x0), 1.0 / kPi);
    }
    const double bound = 6.0 / (kernel.delta * kernel.delta) * (1.0 - sup);
    return std::max(bound, 0.0);
  }
  // PowerAlpha with alpha in (0,1): lambda(n) = lambda_inf - c n^(a-1) f(n
  // delta) with f ranging inside [f(3pi/2), f(pi/2)].
  const double a = kernel.alpha;
  const double f_hi = cos_power_integral(0.5 * kPi, a);
  const double f_lo = cos_power_integral(1.5 * kPi, a);
  const double envelope = std::max(std::fabs(f_hi), std::fabs(f_lo));
  const double c = 2.0 * (3.0 - a) * std::pow(kernel.delta, a - 3.0);
  const double limit = eigenvalue_limit(kernel).value;
  const double bound = limit - c * std::pow(n0, a - 1.0) * envelope;
  return std::max(bound, 0.0);
}

}  // namespace nok
