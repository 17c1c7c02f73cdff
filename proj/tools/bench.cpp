// Times the data-parallel kernels against their serial reference paths and
// verifies the results are bit-identical.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "nok/energy.hpp"
#include "nok/optimize.hpp"
#include "nok/parallel.hpp"

using namespace nok;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Timing {
  double serial = 0.0;
  double parallel = 0.0;
  bool identical = false;
};

void print_row(const char* name, const Timing& t) {
  std::printf("%-34s %9.3f ms %9.3f ms %6.2fx  %s\n", name, 1e3 * t.serial,
              1e3 * t.parallel, t.serial / t.parallel,
              t.identical ? "identical" : "MISMATCH");
}

Timing bench_spectrum_table(const KernelSpec& kernel, int n_max) {
  Timing t;
  Clock::time_point t0 = Clock::now();
  SpectrumTable serial(kernel);
  serial.ensure(n_max, Exec::Serial);
  t.serial = seconds_since(t0);

  t0 = Clock::now();
  SpectrumTable parallel(kernel);
  parallel.ensure(n_max, Exec::Parallel);
  t.parallel = seconds_since(t0);

  t.identical = true;
  for (int n = 0; n <= n_max; ++n) {
    if (serial(n) != parallel(n)) t.identical = false;
  }
  return t;
}

Timing bench_landscape(const KernelSpec& kernel, int cap) {
  Timing t;
  Clock::time_point t0 = Clock::now();
  EnergyLandscape serial(kernel, 0.3, 500, cap, Exec::Serial);
  t.serial = seconds_since(t0);

  t0 = Clock::now();
  EnergyLandscape parallel(kernel, 0.3, 500, cap, Exec::Parallel);
  t.parallel = seconds_since(t0);

  t.identical = true;
  for (int n = 1; n <= cap; ++n) {
    if (serial.f(n) != parallel.f(n)) t.identical = false;
  }
  return t;
}

Timing bench_sweep(const KernelSpec& kernel, int points, int cap) {
  const std::vector<double> grid = log_grid(1.0, 1e6, points);
  Timing t;
  Clock::time_point t0 = Clock::now();
  const SweepResult serial = gamma_sweep(kernel, 0.3, grid, cap, Exec::Serial);
  t.serial = seconds_since(t0);

  t0 = Clock::now();
  const SweepResult parallel = gamma_sweep(kernel, 0.3, grid, cap, Exec::Parallel);
  t.parallel = seconds_since(t0);

  t.identical = serial.n_star_values == parallel.n_star_values;
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  // small | default | large working sets
  int scale = 1;
  if (argc > 1) scale = std::atoi(argv[1]);
  if (scale < 1) scale = 1;

  const int table_n = 20000 * scale;
  const int cap = 100 * scale;
  const int sweep_points = 100 * scale;

  std::printf("jobs=%d scale=%d\n", max_jobs(), scale);
  std::printf("%-34s %12s %12s %7s\n", "kernel", "serial", "parallel", "speedup");

  print_row("spectrum table, power(2.5, 0.5)",
            bench_spectrum_table(KernelSpec::power(2.5, 0.5), table_n));
  print_row("spectrum table, constant(0.3)",
            bench_spectrum_table(KernelSpec::constant(0.3), table_n));
  print_row("landscape fill, power(2.5, 0.5)",
            bench_landscape(KernelSpec::power(2.5, 0.5), cap));
  print_row("gamma sweep, constant(0.3)",
            bench_sweep(KernelSpec::constant(0.3), sweep_points, cap));
  print_row("gamma sweep, gauss(0.5)",
            bench_sweep(KernelSpec::gauss(0.5), sweep_points, cap));
  return 0;
}
