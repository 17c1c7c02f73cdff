#ifndef NOK_OPTIMIZE_HPP
#define NOK_OPTIMIZE_HPP

#include <memory>
#include <optional>
#include <vector>

#include "nok/energy.hpp"

namespace nok {

struct OptimalResult {
  int n_star = 1;               // largest minimizer of E_tot
  std::optional<int> n_tilde;   // smallest global minimizer of F, if attained
  bool bounded = false;         // N*(gamma) has a finite upper bound
  double energy_at_star = 0.0;
  bool cap_saturated = false;   // argmin hit the scan cap on an unbounded kernel
  int scan_cap_used = 0;
};

struct SweepResult {
  std::vector<double> gamma_grid;
  std::vector<int> n_star_values;
  KernelSpec kernel;
  double omega = 0.0;
  int scan_cap = 0;
  bool bounded = false;
  bool any_cap_saturated = false;
};

enum class DeltaEffectMode {
  InstantPromote,
  InstantDemote,
  CumulativePromote,
  CumulativeDemote,
  Unchanged,
  Undetermined,
};

const char* mode_name(DeltaEffectMode mode);

struct DeltaEffectRow {
  double delta = 0.0;
  int n_star = 1;
  int n_star_local = 1;  // N* under the delta = 0 local baseline
  // d/d delta of Delta_N F and Delta_delta Delta_N F at N*-1 and N*;
  // the N*-1 entries are NaN when N* = 1 (the condition is vacuous).
  double d_delta_at_nm1 = 0.0;
  double d_delta_at_n = 0.0;
  double cumulative_at_nm1 = 0.0;
  double cumulative_at_n = 0.0;
  DeltaEffectMode instant = DeltaEffectMode::Undetermined;
  DeltaEffectMode cumulative = DeltaEffectMode::Undetermined;
  DeltaEffectMode mode = DeltaEffectMode::Undetermined;
};

struct DeltaEffectReport {
  DeltaEffectMode mode = DeltaEffectMode::Undetermined;
  int n_star_local = 1;
  std::vector<DeltaEffectRow> rows;
};

struct BoundCheckResult {
  bool bounded = false;
  std::optional<int> bound;
  bool spectral_bounded = false;      // lambda attains a discrete global max
  bool empirically_saturated = false; // n_star stopped growing on the gamma grid
  bool agree = false;
  int n_star_at_gamma_max = 0;
};

// max(200, ceil(4*pi/delta)): keeps the first two troughs of F inside the scan.
int default_scan_cap(const KernelSpec& kernel);

// F(N) for integer N = 1..cap with a fixed kernel/omega/truncation; the
// gamma-independent part of every sweep. Table fill is the data-parallel
// kernel; results are identical under Serial and Parallel execution.
class EnergyLandscape {
 public:
  EnergyLandscape(const KernelSpec& kernel, double omega, int truncation_m,
                  int cap, Exec exec = Exec::Serial);

  void extend(int cap, Exec exec = Exec::Serial);
  int cap() const { return static_cast<int>(f_values_.size()); }
  double f(int n) const { return f_values_[n - 1]; }
  double tail(int n) const { return tail_bounds_[n - 1]; }
  double energy(int n, double gamma) const;
  int largest_energy_argmin(double gamma) const;
  int smallest_f_argmin() const;
  const KernelSpec& kernel() const { return params_.kernel; }
  double omega() const { return params_.omega; }

 private:
  EnergyParams params_;  // gamma unused
  SpectrumTable table_;
  std::vector<double> f_values_;
  std::vector<double> tail_bounds_;
};

OptimalResult n_star(const EnergyParams& params, int scan_cap);

std::optional<int> n_tilde(const EnergyParams& params, int scan_cap);

SweepResult gamma_sweep(const KernelSpec& kernel, double omega,
                        const std::vector<double>& gamma_grid, int scan_cap,
                        Exec exec = Exec::Parallel, int truncation_m = 500);

DeltaEffectReport delta_effect_report(const KernelSpec& kernel, double omega,
                                      double gamma,
                                      const std::vector<double>& delta_grid,
                                      int scan_cap = 0, int truncation_m = 500);

BoundCheckResult upper_bound_check(const KernelSpec& kernel, double omega,
                                   double gamma_max, int scan_cap);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace nok

#endif
