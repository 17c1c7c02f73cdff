#include "nok/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nok/errors.hpp"

namespace nok {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieRelTol = 1e-12;

// Exact ties in the discrete argmin are broken by this relative band.
double tie_band(double best) { return kTieRelTol * std::max(1.0, std::fabs(best)); }

bool kernel_bounded(const KernelSpec& kernel) {
  switch (classify(kernel)) {
    case KernelCase::I:
      return true;
    case KernelCase::II:
      return discrete_lambda_argmax(kernel, default_argmax_scan_cap(kernel)).bounded;
    default:
      return false;
  }
}

int sign_with_tol(double v, double tol = 1e-12) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

DeltaEffectMode classify_signs(int s_nm1, int s_n, bool promote_kind) {
  const bool promote_ok = s_nm1 <= 0 && s_n <= 0;
  const bool demote_ok = s_nm1 >= 0 && s_n >= 0;
  if (promote_ok && demote_ok) return DeltaEffectMode::Unchanged;
  if (promote_ok) {
    return promote_kind ? DeltaEffectMode::InstantPromote
                        : DeltaEffectMode::CumulativePromote;
  }
  if (demote_ok) {
    return promote_kind ? DeltaEffectMode::InstantDemote
                        : DeltaEffectMode::CumulativeDemote;
  }
  // mixed: <=0 at N*-1 with >=0 at N* keeps both optimality inequalities,
  // the opposite mix decides nothing
  if (s_nm1 < 0 && s_n > 0) return DeltaEffectMode::Unchanged;
  return DeltaEffectMode::Undetermined;
}

bool is_promote(DeltaEffectMode m) {
  return m == DeltaEffectMode::InstantPromote || m == DeltaEffectMode::CumulativePromote;
}
bool is_demote(DeltaEffectMode m) {
  return m == DeltaEffectMode::InstantDemote || m == DeltaEffectMode::CumulativeDemote;
}

}  // namespace

const char* mode_name(DeltaEffectMode mode) {
  switch (mode) {
    case DeltaEffectMode::InstantPromote: return "instant-promote";
    case DeltaEffectMode::InstantDemote: return "instant-demote";
    case DeltaEffectMode::CumulativePromote: return "cumulative-promote";
    case DeltaEffectMode::CumulativeDemote: return "cumulative-demote";
    case DeltaEffectMode::Unchanged: return "unchanged";
    case DeltaEffectMode::Undetermined: return "undetermined";
  }
  return "?";
}

int default_scan_cap(const KernelSpec& kernel) {
  if (kernel.family == KernelFamily::ScreenedPoisson ||
      kernel.family == KernelFamily::LocalLaplacian || kernel.delta <= 0.0) {
    return 200;
  }
  return std::max(200, static_cast<int>(std::ceil(4.0 * kPi / kernel.delta)));
}

EnergyLandscape::EnergyLandscape(const KernelSpec& kernel, double omega,
                                 int truncation_m, int cap, Exec exec)
    : params_{1.0, omega, kernel, truncation_m}, table_(kernel) {
  params_.validate();
  if (cap < 1) throw ParameterDomainError("landscape cap must be >= 1");
  extend(cap, exec);
}

void EnergyLandscape::extend(int cap, Exec exec) {
  const int old_cap = static_cast<int>(f_values_.size());
  if (cap <= old_cap) return;
  table_.ensure(params_.truncation_m * cap, exec);
  f_values_.resize(cap);
  tail_bounds_.resize(cap);
  parallel_for(old_cap, cap, exec, [this](int i) {
    const RepulsionValue r = repulsion_f(i + 1, params_, table_);
    f_values_[i] = r.value;
    tail_bounds_[i] = r.tail_bound;
  });
}

double EnergyLandscape::energy(int n, double gamma) const {
  return 2.0 * n + 2.0 * gamma / kPi * f(n);
}

int EnergyLandscape::largest_energy_argmin(double gamma) const {
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= cap(); ++n) best = std::min(best, energy(n, gamma));
  const double band = tie_band(best);
  int arg = 1;
  for (int n = 1; n <= cap(); ++n) {
    if (energy(n, gamma) <= best + band) arg = n;
  }
  return arg;
}

int EnergyLandscape::smallest_f_argmin() const {
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= cap(); ++n) best = std::min(best, f(n));
  const double band = tie_band(best);
  for (int n = 1; n <= cap(); ++n) {
    if (f(n) <= best + band) return n;
  }
  return 1;
}

namespace {

struct LandscapeSetup {
  std::unique_ptr<EnergyLandscape> land;
  bool bounded = false;
  std::optional<int> tilde;
  int cap = 0;
};

// Shared preamble of n_star / n_tilde / gamma_sweep: decide boundedness,
// locate the F minimum when it exists, and auto-raise the scan cap so a
// bounded optimum sits strictly inside the scan.
LandscapeSetup prepare_landscape(const KernelSpec& kernel, double omega,
                                 int truncation_m, int scan_cap, Exec exec) {
  LandscapeSetup s;
  s.bounded = kernel_bounded(kernel);
  s.cap = scan_cap;
  if (s.bounded) {
    const int tilde_cap = std::max(scan_cap, default_scan_cap(kernel));
    s.land = std::make_unique<EnergyLandscape>(kernel, omega, truncation_m,
                                               tilde_cap, exec);
    s.tilde = s.land->smallest_f_argmin();
    s.cap = std::max(scan_cap, 2 * *s.tilde);
  }
  if (!s.land) {
    s.land = std::make_unique<EnergyLandscape>(kernel, omega, truncation_m,
                                               s.cap, exec);
  } else {
    s.land->extend(s.cap, exec);
  }
  return s;
}

}  // namespace

OptimalResult n_star(const EnergyParams& params, int scan_cap) {
  params.validate();
  if (scan_cap < 2) throw ParameterDomainError("scan_cap must be >= 2");
  LandscapeSetup s = prepare_landscape(params.kernel, params.omega,
                                       params.truncation_m, scan_cap, Exec::Serial);
  OptimalResult out;
  out.n_star = s.land->largest_energy_argmin(params.gamma);
  out.n_tilde = s.tilde;
  out.bounded = s.bounded;
  out.energy_at_star = s.land->energy(out.n_star, params.gamma);
  out.cap_saturated = !s.bounded && out.n_star == s.cap;
  out.scan_cap_used = s.cap;
  return out;
}

std::optional<int> n_tilde(const EnergyParams& params, int scan_cap) {
  params.validate();
  if (scan_cap < 2) throw ParameterDomainError("scan_cap must be >= 2");
  if (!kernel_bounded(params.kernel)) return std::nullopt;
  const int cap = std::max(scan_cap, default_scan_cap(params.kernel));
  EnergyLandscape land(params.kernel, params.omega, params.truncation_m, cap);
  return land.smallest_f_argmin();
}

SweepResult gamma_sweep(const KernelSpec& kernel, double omega,
                        const std::vector<double>& gamma_grid, int scan_cap,
                        Exec exec, int truncation_m) {
  if (gamma_grid.empty()) throw ParameterDomainError("gamma grid is empty");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid[i] > 0.0)) throw ParameterDomainError("gamma grid must be positive");
    if (i > 0 && !(gamma_grid[i] > gamma_grid[i - 1])) {
      throw ParameterDomainError("gamma grid must be strictly ascending");
    }
  }
  if (scan_cap < 2) throw ParameterDomainError("scan_cap must be >= 2");

  LandscapeSetup s = prepare_landscape(kernel, omega, truncation_m, scan_cap, exec);
  const EnergyLandscape& land = *s.land;

  SweepResult out;
  out.gamma_grid = gamma_grid;
  out.n_star_values.assign(gamma_grid.size(), 0);
  out.kernel = kernel;
  out.omega = omega;
  out.scan_cap = s.cap;
  out.bounded = s.bounded;

  parallel_for(0, static_cast<int>(gamma_grid.size()), exec, [&](int i) {
    out.n_star_values[i] = land.largest_energy_argmin(gamma_grid[i]);
  });

  for (std::size_t i = 1; i < out.n_star_values.size(); ++i) {
    if (out.n_star_values[i] < out.n_star_values[i - 1]) {
      throw InternalConsistencyError("n_star staircase decreased along gamma");
    }
  }
  if (!s.bounded) {
    for (int v : out.n_star_values) {
      if (v == s.cap) out.any_cap_saturated = true;
    }
  }
  return out;
}

DeltaEffectReport delta_effect_report(const KernelSpec& kernel, double omega,
                                      double gamma,
                                      const std::vector<double>& delta_grid,
                                      int scan_cap, int truncation_m) {
  if (delta_grid.empty()) throw ParameterDomainError("delta grid is empty");
  for (std::size_t i = 1; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > delta_grid[i - 1])) {
      throw ParameterDomainError("delta grid must be strictly ascending");
    }
  }

  DeltaEffectReport report;

  EnergyParams local;
  local.gamma = gamma;
  local.omega = omega;
  local.kernel = KernelSpec::local_laplacian();
  local.truncation_m = truncation_m;
  const int local_cap = scan_cap > 0 ? scan_cap : default_scan_cap(local.kernel);
  report.n_star_local = n_star(local, local_cap).n_star;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double delta : delta_grid) {
    EnergyParams p;
    p.gamma = gamma;
    p.omega = omega;
    p.kernel = kernel;
    p.kernel.delta = delta;
    p.truncation_m = truncation_m;
    p.validate();

    const int cap = scan_cap > 0 ? scan_cap : default_scan_cap(p.kernel);
    DeltaEffectRow row;
    row.delta = delta;
    row.n_star = n_star(p, cap).n_star;
    row.n_star_local = report.n_star_local;

    const double h = 1e-3 * delta;
    row.d_delta_at_n = d_delta_of_delta_n_f(row.n_star, p, h).value;
    row.cumulative_at_n = cumulative_delta_n_f(row.n_star, p);
    int s_dd_nm1 = 0;
    int s_cu_nm1 = 0;
    if (row.n_star >= 2) {
      row.d_delta_at_nm1 = d_delta_of_delta_n_f(row.n_star - 1, p, h).value;
      row.cumulative_at_nm1 = cumulative_delta_n_f(row.n_star - 1, p);
      s_dd_nm1 = sign_with_tol(row.d_delta_at_nm1);
      s_cu_nm1 = sign_with_tol(row.cumulative_at_nm1);
    } else {
      row.d_delta_at_nm1 = nan;
      row.cumulative_at_nm1 = nan;
    }
    const int s_dd_n = sign_with_tol(row.d_delta_at_n);
    const int s_cu_n = sign_with_tol(row.cumulative_at_n);
    row.instant = classify_signs(s_dd_nm1, s_dd_n, true);
    row.cumulative = classify_signs(s_cu_nm1, s_cu_n, false);

    row.mode = row.instant;
    if (row.mode == DeltaEffectMode::Unchanged ||
        row.mode == DeltaEffectMode::Undetermined) {
      if (is_promote(row.cumulative) || is_demote(row.cumulative)) {
        row.mode = row.cumulative;
      } else if (row.instant == DeltaEffectMode::Unchanged ||
                 row.cumulative == DeltaEffectMode::Unchanged) {
        row.mode = DeltaEffectMode::Unchanged;
      }
    }
    report.rows.push_back(row);
  }

  // Aggregate: unanimous direction wins, Unchanged rows do not veto.
  bool any_promote = false;
  bool any_demote = false;
  bool any_undetermined = false;
  for (const DeltaEffectRow& row : report.rows) {
    any_promote = any_promote || is_promote(row.mode);
    any_demote = any_demote || is_demote(row.mode);
    any_undetermined = any_undetermined || row.mode == DeltaEffectMode::Undetermined;
  }
  if (any_promote && !any_demote && !any_undetermined) {
    report.mode = report.rows.front().instant == DeltaEffectMode::InstantPromote
                      ? DeltaEffectMode::InstantPromote
                      : DeltaEffectMode::CumulativePromote;
  } else if (any_demote && !any_promote && !any_undetermined) {
    report.mode = report.rows.front().instant == DeltaEffectMode::InstantDemote
                      ? DeltaEffectMode::InstantDemote
                      : DeltaEffectMode::CumulativeDemote;
  } else if (!any_promote && !any_demote && !any_undetermined) {
    report.mode = DeltaEffectMode::Unchanged;
  } else {
    report.mode = DeltaEffectMode::Undetermined;
  }
  return report;
}

BoundCheckResult upper_bound_check(const KernelSpec& kernel, double omega,
                                   double gamma_max, int scan_cap) {
  kernel.validate();
  if (!(gamma_max > 1.0)) throw ParameterDomainError("gamma_max must exceed 1");
  if (scan_cap < 2) throw ParameterDomainError("scan_cap must be >= 2");

  BoundCheckResult out;
  const ArgmaxResult spectral =
      discrete_lambda_argmax(kernel, default_argmax_scan_cap(kernel));
  out.spectral_bounded = spectral.bounded;

  const std::vector<double> grid = log_grid(1.0, gamma_max, 40);
  const SweepResult sweep =
      gamma_sweep(kernel, omega, grid, scan_cap, Exec::Parallel);

  out.n_star_at_gamma_max = sweep.n_star_values.back();
  // saturated: no growth over the last two decades of gamma and not pinned
  // at the cap
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= gamma_max / 100.0) i0 = i;
  }
  out.empirically_saturated =
      sweep.n_star_values.back() == sweep.n_star_values[i0] &&
      sweep.n_star_values.back() < sweep.scan_cap;
  out.agree = out.spectral_bounded == out.empirically_saturated;
  out.bounded = out.spectral_bounded;
  if (out.bounded) {
    EnergyParams p;
    p.gamma = 1.0;
    p.omega = omega;
    p.kernel = kernel;
    out.bound = n_tilde(p, scan_cap);
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw ParameterDomainError("log grid needs 0 < lo < hi and >= 2 points");
  }
  std::vector<double> grid(points);
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace nok
