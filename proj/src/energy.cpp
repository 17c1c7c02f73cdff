#include "nok/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nok/errors.hpp"

namespace nok {

namespace {

constexpr double kPi = std::numbers::pi;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double term) {
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// sum_{m>M} 1/m^2 = pi^2/6 - sum_{m<=M} 1/m^2, summed small-to-large.
double zeta2_remainder(int m_trunc) {
  KahanSum partial;
  for (int m = m_trunc; m >= 1; --m) {
    partial.add(1.0 / (static_cast<double>(m) * m));
  }
  const double rem = kPi * kPi / 6.0 - partial.sum;
  return rem > 0.0 ? rem : 0.0;
}

double sin_weight(int m, double omega) {
  const double s = std::sin(m * kPi * omega);
  return (s / m) * (s / m);
}

double tail_bound_for(const KernelSpec& kernel, double big_n, int m_trunc) {
  const double n0 = m_trunc * big_n;
  const double lambda_min = lambda_tail_lower_bound(kernel, n0);
  const double rem = zeta2_remainder(m_trunc);
  if (lambda_min <= 0.0) return std::numeric_limits<double>::infinity();
  return rem / lambda_min;
}

// d/d delta of 1/lambda(n) where it has a simple closed form.
double d_delta_inv_lambda(const KernelSpec& kernel, double n) {
  switch (kernel.family) {
    case KernelFamily::PowerAlpha: {
      const double a = kernel.alpha;
      const double d = kernel.delta;
      const double lam = eigenvalue(kernel, n);
      const double one_minus_cos = 1.0 - std::cos(n * d);
      return (3.0 - a) / d / lam -
             2.0 * (3.0 - a) / (d * d * d) * one_minus_cos / (lam * lam);
    }
    case KernelFamily::ScreenedPoisson: {
      const double lam = kernel.delta + n * n;
      return -1.0 / (lam * lam);
    }
    default:
      throw InternalConsistencyError("no analytic delta-derivative for this kernel");
  }
}

bool has_analytic_d_delta(const KernelSpec& kernel) {
  return kernel.family == KernelFamily::PowerAlpha ||
         kernel.family == KernelFamily::ScreenedPoisson;
}

}  // namespace

void EnergyParams::validate() const {
  kernel.validate();
  if (!(gamma >= 0.0)) throw ParameterDomainError("gamma must be >= 0");
  if (!(omega > 0.0 && omega <= 0.5)) {
    throw ParameterDomainError("omega must lie in (0, 1/2]");
  }
  if (truncation_m < 1) throw ParameterDomainError("truncation_m must be >= 1");
}

double step_fourier_coeff_sq(long n, long big_n, double omega) {
  if (n < 1 || big_n < 1) throw ParameterDomainError("n and N must be >= 1");
  if (n % big_n != 0) return 0.0;
  const double ratio = static_cast<double>(big_n) / static_cast<double>(n);
  const double s = std::sin(n * kPi * omega / big_n);
  return ratio * ratio * s * s / (kPi * kPi);
}

RepulsionValue repulsion_f(double big_n, const EnergyParams& params) {
  params.validate();
  if (!(big_n >= 1.0)) throw ParameterDomainError("N must be >= 1");
  KahanSum f;
  for (int m = 1; m <= params.truncation_m; ++m) {
    const double lam = eigenvalue(params.kernel, m * big_n);
    if (lam == 0.0) throw SingularModeError("lambda(mN) = 0 in repulsion series");
    f.add(sin_weight(m, params.omega) / lam);
  }
  return {f.sum, tail_bound_for(params.kernel, big_n, params.truncation_m)};
}

RepulsionValue repulsion_f(int big_n, const EnergyParams& params,
                           const SpectrumTable& table) {
  if (big_n < 1) throw ParameterDomainError("N must be >= 1");
  KahanSum f;
  for (int m = 1; m <= params.truncation_m; ++m) {
    const double lam = table(m * big_n);
    if (lam == 0.0) throw SingularModeError("lambda(mN) = 0 in repulsion series");
    f.add(sin_weight(m, params.omega) / lam);
  }
  return {f.sum, tail_bound_for(params.kernel, big_n, params.truncation_m)};
}

SeriesLimit f_infinity(const EnergyParams& params) {
  params.validate();
  const EigenvalueLimit limit = eigenvalue_limit(params.kernel);
  if (!limit.finite) return {0.0, true};
  const double theta = kPi * params.omega;
  return {theta * (kPi - theta) / 2.0 / limit.value, false};
}

EnergyBreakdown total_energy(double big_n, const EnergyParams& params) {
  const RepulsionValue f = repulsion_f(big_n, params);
  const double scale = 2.0 * params.gamma / kPi;
  EnergyBreakdown out;
  out.attraction = 2.0 * big_n;
  out.repulsion = scale * f.value;
  out.total = out.attraction + out.repulsion;
  out.truncation_tail_bound = scale * f.tail_bound;
  return out;
}

double delta_n_f(int big_n, const EnergyParams& params) {
  if (big_n < 1) throw ParameterDomainError("N must be >= 1");
  return repulsion_f(static_cast<double>(big_n) + 1.0, params).value -
         repulsion_f(static_cast<double>(big_n), params).value;
}

DeltaDerivative d_delta_of_delta_n_f(int big_n, const EnergyParams& params, double h) {
  params.validate();
  if (big_n < 1) throw ParameterDomainError("N must be >= 1");
  if (!(h > 0.0)) throw ParameterDomainError("step h must be > 0");

  DeltaDerivative out;
  out.has_analytic = has_analytic_d_delta(params.kernel);
  if (out.has_analytic) {
    KahanSum series;
    for (int m = 1; m <= params.truncation_m; ++m) {
      const double g_up = d_delta_inv_lambda(params.kernel, m * (big_n + 1.0));
      const double g_lo = d_delta_inv_lambda(params.kernel, m * static_cast<double>(big_n));
      series.add((g_up - g_lo) * sin_weight(m, params.omega));
    }
    out.analytic = series.sum;
  }

  out.has_finite_difference = params.kernel.delta - h > 0.0;
  if (out.has_finite_difference) {
    EnergyParams up = params;
    up.kernel.delta += h;
    EnergyParams down = params;
    down.kernel.delta -= h;
    const double df_up = delta_n_f(big_n, up);
    const double df_down = delta_n_f(big_n, down);
    out.finite_difference = (df_up - df_down) / (2.0 * h);
    if (out.has_analytic) {
      const double diff = std::fabs(out.finite_difference - out.analytic);
      const double scale = std::max(std::fabs(out.analytic), std::fabs(out.finite_difference));
      const double fd_noise_floor = 1e-9 * (std::fabs(df_up) + std::fabs(df_down)) / h + 1e-14;
      if (diff > 1e-4 * scale && diff > fd_noise_floor) {
        throw InternalConsistencyError(
            "analytic and finite-difference d/d delta of Delta_N F disagree");
      }
    }
  } else if (!out.has_analytic) {
    throw ParameterDomainError("delta - h <= 0: finite-difference step too large");
  }

  out.value = out.has_analytic ? out.analytic : out.finite_difference;
  return out;
}

double cumulative_delta_n_f(int big_n, const EnergyParams& params) {
  params.validate();
  EnergyParams local = params;
  local.kernel = KernelSpec::local_laplacian();
  return delta_n_f(big_n, params) - delta_n_f(big_n, local);
}

SpectrumTable::SpectrumTable(const KernelSpec& kernel) : kernel_(kernel) {
  kernel_.validate();
  values_.assign(1, eigenvalue(kernel_, 0.0));
}

void SpectrumTable::ensure(int n_max, Exec exec) {
  const int old_size = static_cast<int>(values_.size());
  if (n_max + 1 <= old_size) return;
  values_.resize(n_max + 1);
  parallel_for(old_size, n_max + 1, exec, [this](int n) {
    values_[n] = eigenvalue(kernel_, static_cast<double>(n));
  });
}

}  // namespace nok
