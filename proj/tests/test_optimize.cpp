#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nok/errors.hpp"
#include "nok/optimize.hpp"

using namespace nok;

namespace {
constexpr double kPi = std::numbers::pi;

EnergyParams make(KernelSpec kernel, double omega, double gamma) {
  EnergyParams p;
  p.kernel = kernel;
  p.omega = omega;
  p.gamma = gamma;
  return p;
}
}  // namespace

TEST_CASE("tiny gamma gives a single bubble") {
  for (const KernelSpec& k :
       {KernelSpec::constant(0.3), KernelSpec::power(2.5, 0.5),
        KernelSpec::gauss(0.4), KernelSpec::local_laplacian()}) {
    CHECK(n_star(make(k, 0.3, 1e-6), 50).n_star == 1);
  }
}

TEST_CASE("constant kernel: n_tilde sits in the first trough") {
  const std::optional<int> nt = n_tilde(make(KernelSpec::constant(0.3), 0.2, 1.0), 200);
  REQUIRE(nt.has_value());
  CHECK(*nt * 0.3 > kPi);
  CHECK(*nt * 0.3 < 2.0 * kPi);

  // dense continuum scan oracle: integer argmin of F near the continuum trough
  const EnergyParams p = make(KernelSpec::constant(0.3), 0.2, 1.0);
  int best_n = 1;
  double best = repulsion_f(1.0, p).value;
  for (int n = 2; n <= 100; ++n) {
    const double f = repulsion_f(static_cast<double>(n), p).value;
    if (f < best) {
      best = f;
      best_n = n;
    }
  }
  CHECK(*nt == best_n);
}

TEST_CASE("n_tilde absent for unbounded kernels") {
  CHECK_FALSE(n_tilde(make(KernelSpec::power(2.5, 0.3), 0.3, 1.0), 100).has_value());
  CHECK_FALSE(n_tilde(make(KernelSpec::power(0.5, 0.1), 0.3, 1.0), 100).has_value());
  CHECK_FALSE(n_tilde(make(KernelSpec::gauss(0.5), 0.3, 1.0), 100).has_value());
}

TEST_CASE("constant kernel: N* never exceeds n_tilde and saturates there") {
  const KernelSpec k = KernelSpec::constant(0.3);
  const std::optional<int> nt = n_tilde(make(k, 0.2, 1.0), 200);
  REQUIRE(nt.has_value());
  for (double gamma : {1.0, 1e2, 1e4, 1e6, 1e8}) {
    const OptimalResult r = n_star(make(k, 0.2, gamma), 200);
    CHECK(r.bounded);
    CHECK(r.n_star <= *nt);
  }
  CHECK(n_star(make(k, 0.2, 1e8), 200).n_star == *nt);
}

TEST_CASE("unbounded kernels keep growing with gamma") {
  for (const KernelSpec& k :
       {KernelSpec::power(0.5, 0.1), KernelSpec::power(2.5, 0.5),
        KernelSpec::gauss(0.5), KernelSpec::screened_poisson(1.0),
        KernelSpec::local_laplacian()}) {
    const OptimalResult lo = n_star(make(k, 0.3, 1e2), 250);
    const OptimalResult hi = n_star(make(k, 0.3, 1e6), 250);
    CHECK_FALSE(lo.bounded);
    CHECK(hi.n_star > lo.n_star);
    // tenfold increases keep growing until the cap interferes
    int prev = lo.n_star;
    for (double gamma = 1e3; gamma <= 1e6; gamma *= 10.0) {
      const OptimalResult r = n_star(make(k, 0.3, gamma), 250);
      if (r.cap_saturated) break;
      CHECK(r.n_star > prev);
      prev = r.n_star;
    }
  }
}

TEST_CASE("monotone staircases on 50-point log grids") {
  const std::vector<double> grid = log_grid(1.0, 1e6, 50);
  for (const KernelSpec& k :
       {KernelSpec::constant(0.3), KernelSpec::power(0.5, 0.1),
        KernelSpec::power(2.5, 0.5), KernelSpec::gauss(0.5),
        KernelSpec::screened_poisson(1.0)}) {
    const SweepResult s = gamma_sweep(k, 0.3, grid, 200);
    for (std::size_t i = 1; i < s.n_star_values.size(); ++i) {
      CHECK(s.n_star_values[i] >= s.n_star_values[i - 1]);
    }
  }
}

TEST_CASE("screened delta = 0 and local laplacian sweeps are bit identical") {
  const std::vector<double> grid = log_grid(1.0, 1e5, 30);
  const SweepResult a = gamma_sweep(KernelSpec::screened_poisson(0.0), 0.3, grid, 150);
  const SweepResult b = gamma_sweep(KernelSpec::local_laplacian(), 0.3, grid, 150);
  CHECK(a.n_star_values == b.n_star_values);
}

TEST_CASE("sweeps are deterministic and policy independent") {
  const std::vector<double> grid = log_grid(1.0, 1e6, 40);
  const KernelSpec k = KernelSpec::power(2.5, 0.5);
  const SweepResult s1 = gamma_sweep(k, 0.3, grid, 150, Exec::Serial);
  const SweepResult s2 = gamma_sweep(k, 0.3, grid, 150, Exec::Parallel);
  const SweepResult s3 = gamma_sweep(k, 0.3, grid, 150, Exec::Parallel);
  CHECK(s1.n_star_values == s2.n_star_values);
  CHECK(s2.n_star_values == s3.n_star_values);
}

TEST_CASE("energy landscape serial and parallel fills agree bitwise") {
  EnergyLandscape serial(KernelSpec::power(2.2, 0.4), 0.3, 300, 60, Exec::Serial);
  EnergyLandscape parallel(KernelSpec::power(2.2, 0.4), 0.3, 300, 60, Exec::Parallel);
  for (int n = 1; n <= 60; ++n) {
    CHECK(serial.f(n) == parallel.f(n));
    CHECK(serial.tail(n) == parallel.tail(n));
  }
}

TEST_CASE("delta effect: power alpha = 2.5 promotes") {
  const DeltaEffectReport rep =
      delta_effect_report(KernelSpec::power(2.5, 0.5), 0.3, 1e4, {0.5, 1.0});
  CHECK(rep.mode == DeltaEffectMode::InstantPromote);
  for (const DeltaEffectRow& row : rep.rows) {
    CHECK(row.n_star >= row.n_star_local);
  }
}

TEST_CASE("delta effect: gauss demotes") {
  const DeltaEffectReport rep =
      delta_effect_report(KernelSpec::gauss(0.5), 0.3, 1e4, {0.5, 1.0});
  CHECK(rep.mode == DeltaEffectMode::InstantDemote);
  for (const DeltaEffectRow& row : rep.rows) {
    CHECK(row.n_star <= row.n_star_local);
    CHECK(row.d_delta_at_n >= -1e-12);
    if (row.n_star >= 2) CHECK(row.d_delta_at_nm1 >= -1e-12);
    CHECK(row.cumulative_at_n >= -1e-14);
  }
}

TEST_CASE("delta effect: screened poisson demotes") {
  const DeltaEffectReport rep =
      delta_effect_report(KernelSpec::screened_poisson(1.0), 0.3, 1e4, {0.5, 1.0, 2.0});
  CHECK(rep.mode == DeltaEffectMode::InstantDemote);
  for (const DeltaEffectRow& row : rep.rows) {
    CHECK(row.n_star <= row.n_star_local);
  }
}

TEST_CASE("upper bound check") {
  const BoundCheckResult c = upper_bound_check(KernelSpec::constant(0.3), 0.2, 1e8, 200);
  CHECK(c.bounded);
  REQUIRE(c.bound.has_value());
  CHECK(*c.bound == *n_tilde(make(KernelSpec::constant(0.3), 0.2, 1.0), 200));
  CHECK(c.empirically_saturated);
  CHECK(c.agree);

  // alpha = 0.2, delta = 0.1: integers land inside the wide crest intervals
  const BoundCheckResult b = upper_bound_check(KernelSpec::power(0.2, 0.1), 0.25, 1e6, 200);
  CHECK(b.bounded);

  // alpha = 0.3 with delta = 1.3: the single crest (4.41, 5.03) contains no
  // multiple of delta, so the discrete spectrum has no global max
  const BoundCheckResult u = upper_bound_check(KernelSpec::power(0.3, 1.3), 0.25, 1e6, 200);
  CHECK_FALSE(u.bounded);
  CHECK_FALSE(u.bound.has_value());
}

TEST_CASE("rerunning a sweep yields identical values") {
  const std::vector<double> grid = log_grid(2.0, 2e5, 25);
  const SweepResult a = gamma_sweep(KernelSpec::gauss(0.4), 0.25, grid, 120);
  const SweepResult b = gamma_sweep(KernelSpec::gauss(0.4), 0.25, grid, 120);
  CHECK(a.n_star_values == b.n_star_values);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(n_star(make(KernelSpec::constant(0.3), 0.2, 1.0), 1), ParameterDomainError);
  CHECK_THROWS_AS(gamma_sweep(KernelSpec::constant(0.3), 0.2, {}, 100), ParameterDomainError);
  CHECK_THROWS_AS(gamma_sweep(KernelSpec::constant(0.3), 0.2, {2.0, 1.0}, 100),
                  ParameterDomainError);
  CHECK_THROWS_AS(gamma_sweep(KernelSpec::constant(0.3), 0.2, {-1.0, 1.0}, 100),
                  ParameterDomainError);
  CHECK_THROWS_AS(delta_effect_report(KernelSpec::gauss(0.5), 0.3, 10.0, {}),
                  ParameterDomainError);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), ParameterDomainError);
}
