#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nok/energy.hpp"
#include "nok/errors.hpp"
#include "oracles.hpp"

using namespace nok;

namespace {
constexpr double kPi = std::numbers::pi;

EnergyParams make(KernelSpec kernel, double omega, double gamma = 1.0, int m = 500) {
  EnergyParams p;
  p.kernel = kernel;
  p.omega = omega;
  p.gamma = gamma;
  p.truncation_m = m;
  return p;
}
}  // namespace

TEST_CASE("step Fourier coefficients") {
  CHECK(step_fourier_coeff_sq(3, 2, 0.3) == 0.0);
  CHECK(step_fourier_coeff_sq(4, 4, 0.25) ==
        doctest::Approx(1.0 / (2.0 * kPi * kPi)).epsilon(1e-14));
  CHECK(step_fourier_coeff_sq(6, 3, 0.5) == doctest::Approx(0.0).epsilon(1e-25));
  CHECK_THROWS_AS(step_fourier_coeff_sq(0, 1, 0.3), ParameterDomainError);
}

TEST_CASE("step Fourier coefficients match direct quadrature") {
  for (double omega : {0.2, 0.3, 0.5}) {
    for (int big_n = 1; big_n <= 5; ++big_n) {
      for (int n = 1; n <= 20; ++n) {
        const double formula = step_fourier_coeff_sq(n, big_n, omega);
        const double quad = oracles::bubble_fourier_coeff_sq(big_n, n, omega);
        CHECK(std::fabs(formula - quad) < 1e-8);
      }
    }
  }
}

TEST_CASE("repulsion series: screened delta = 0 scaling") {
  const EnergyParams p = make(KernelSpec::screened_poisson(0.0), 0.3);
  for (int n : {1, 2, 5}) {
    const double f1 = repulsion_f(static_cast<double>(n), p).value;
    const double f2 = repulsion_f(static_cast<double>(2 * n), p).value;
    CHECK(f2 == doctest::Approx(f1 / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("repulsion series: constant kernel hits F_infinity at N = k pi / delta") {
  const EnergyParams p = make(KernelSpec::constant(0.3), 0.5);
  const SeriesLimit fi = f_infinity(p);
  CHECK_FALSE(fi.decays_to_zero);
  // derived closed form: delta^2 pi^2 omega (1-omega) / 12
  CHECK(fi.value == doctest::Approx(0.09 * kPi * kPi * 0.25 / 12.0).epsilon(1e-14));
  for (int k = 1; k <= 3; ++k) {
    const RepulsionValue r = repulsion_f(k * kPi / 0.3, p);
    CHECK(std::fabs(r.value - fi.value) <= r.tail_bound + 1e-6);
  }
}

TEST_CASE("f_infinity") {
  const EnergyParams pow_p = make(KernelSpec::power(0.5, 0.1), 0.3);
  const SeriesLimit a = f_infinity(pow_p);
  CHECK_FALSE(a.decays_to_zero);
  // (delta^2 (1-alpha) / (2(3-alpha))) * pi omega * pi (1-omega) / 2
  CHECK(a.value == doctest::Approx(0.001 * kPi * 0.3 * kPi * 0.7 / 2.0).epsilon(1e-12));
  CHECK(a.value == doctest::Approx(1.0363e-3).epsilon(1e-4));

  const SeriesLimit g = f_infinity(make(KernelSpec::gauss(0.2), 0.3));
  CHECK(g.value == doctest::Approx(0.01 * kPi * 0.3 * kPi * 0.7 / 2.0).epsilon(1e-12));

  const SeriesLimit s = f_infinity(make(KernelSpec::screened_poisson(1.0), 0.3));
  CHECK(s.decays_to_zero);
  CHECK(s.value == 0.0);
}

TEST_CASE("total energy") {
  // gamma -> 0: attraction dominates, minimized at N = 1
  const EnergyParams tiny = make(KernelSpec::constant(0.3), 0.3, 1e-9);
  CHECK(total_energy(1, tiny).total < total_energy(2, tiny).total);

  const EnergyParams p = make(KernelSpec::gauss(0.4), 0.25, 7.0);
  const EnergyBreakdown e = total_energy(3, p);
  CHECK(e.attraction == 6.0);
  CHECK(e.total == e.attraction + e.repulsion);
  CHECK(e.truncation_tail_bound >= 0.0);

  // screened delta = 0: E(2) - E(1) = 2 - (2 gamma/pi)(3/4) F(1); closed-form
  // crossing gamma* = 4 pi / (3 F(1))
  const EnergyParams loc = make(KernelSpec::screened_poisson(0.0), 0.3, 1.0);
  const double f1 = repulsion_f(1.0, loc).value;
  const double gamma_star = 4.0 * kPi / (3.0 * f1);
  EnergyParams lo = loc;
  lo.gamma = gamma_star * 0.99;
  EnergyParams hi = loc;
  hi.gamma = gamma_star * 1.01;
  CHECK(total_energy(1, lo).total < total_energy(2, lo).total);
  CHECK(total_energy(1, hi).total > total_energy(2, hi).total);
}

TEST_CASE("truncation honesty: dropped tail is inside the reported bound") {
  for (const KernelSpec& k :
       {KernelSpec::constant(0.3), KernelSpec::power(0.5, 0.2),
        KernelSpec::power(2.5, 0.4), KernelSpec::gauss(0.3),
        KernelSpec::screened_poisson(0.7), KernelSpec::local_laplacian()}) {
    const EnergyParams p500 = make(k, 0.3, 1.0, 500);
    const EnergyParams p2000 = make(k, 0.3, 1.0, 2000);
    for (int n = 1; n <= 30; ++n) {
      const RepulsionValue a = repulsion_f(static_cast<double>(n), p500);
      const RepulsionValue b = repulsion_f(static_cast<double>(n), p2000);
      CHECK(std::fabs(a.value - b.value) <= a.tail_bound);
    }
  }
}

TEST_CASE("alternating sine identity") {
  // |sum_{m<=M} (-1)^m (sin m x / m)^2 + x^2/2| <= 2/M
  for (double x : {0.3 * kPi, 0.45 * kPi}) {
    const int m_max = 4000;
    double sum = 0.0;
    for (int m = 1; m <= m_max; ++m) {
      const double s = std::sin(m * x) / m;
      sum += (m % 2 == 1 ? -1.0 : 1.0) * s * s;
    }
    CHECK(std::fabs(sum + x * x / 2.0) <= 2.0 / m_max);
  }
}

TEST_CASE("sinc-like sign structure of F - F_infinity (constant kernel)") {
  for (double omega : {0.2, 0.4}) {
    const EnergyParams p = make(KernelSpec::constant(0.3), omega);
    const double fi = f_infinity(p).value;
    for (int k = 0; k < 6; ++k) {
      const double mid_n = (k + 0.5) * kPi / 0.3;
      const double diff = repulsion_f(mid_n, p).value - fi;
      if (k % 2 == 0) {
        CHECK(diff > 0.0);
      } else {
        CHECK(diff < 0.0);
      }
    }
  }
}

TEST_CASE("dF/dN signs at the lattice points N delta = k pi (constant kernel)") {
  const EnergyParams p = make(KernelSpec::constant(0.3), 0.2);
  const double h = 1e-4;
  auto dfdn = [&](double n) {
    return (repulsion_f(n + h, p).value - repulsion_f(n - h, p).value) / (2.0 * h);
  };
  CHECK(dfdn(2.0 * kPi / 0.3) > 0.0);
  CHECK(dfdn(3.0 * kPi / 0.3) < 0.0);
  CHECK(dfdn(4.0 * kPi / 0.3) > 0.0);
}

TEST_CASE("Case III: F stays above its limit") {
  const EnergyParams p = make(KernelSpec::power(0.5, 0.1), 0.3);
  const double fi = f_infinity(p).value;
  for (int n = 1; n <= 200; ++n) {
    CHECK(repulsion_f(static_cast<double>(n), p).value > fi);
  }
}

TEST_CASE("forward difference delta_n_f") {
  // screened delta = 0, N = 1: F(2) - F(1) = -(3/4) F(1)
  const EnergyParams loc = make(KernelSpec::screened_poisson(0.0), 0.3);
  const double f1 = repulsion_f(1.0, loc).value;
  CHECK(delta_n_f(1, loc) == doctest::Approx(-0.75 * f1).epsilon(1e-12));

  // Case IV kernels: monotone decreasing F
  const EnergyParams p = make(KernelSpec::power(2.5, 0.5), 0.3);
  for (int n = 1; n <= 50; ++n) CHECK(delta_n_f(n, p) < 0.0);

  // constant kernel: sign change across the first trough (dense-scan oracle)
  const EnergyParams c = make(KernelSpec::constant(0.3), 0.2);
  double prev = repulsion_f(1.0, c).value;
  double trough_n = 0.0;
  for (double n = 2.0; n < 4.0 * kPi / 0.3; n += 1.0) {
    const double cur = repulsion_f(n, c).value;
    if (cur > prev && trough_n == 0.0 && n > kPi / 0.3) trough_n = n - 1.0;
    prev = cur;
  }
  REQUIRE(trough_n > 0.0);
  CHECK(delta_n_f(static_cast<int>(trough_n) - 2, c) < 0.0);
  CHECK(delta_n_f(static_cast<int>(trough_n) + 2, c) > 0.0);
}

TEST_CASE("d/d delta of Delta_N F: analytic vs finite difference") {
  for (double delta : {0.3, 0.5, 1.0}) {
    const EnergyParams p = make(KernelSpec::power(2.5, delta), 0.3);
    for (int n : {1, 2, 5, 12}) {
      const DeltaDerivative d = d_delta_of_delta_n_f(n, p, 1e-3 * delta);
      CHECK(d.has_analytic);
      CHECK(d.has_finite_difference);
      const double scale = std::max(std::fabs(d.analytic), std::fabs(d.finite_difference));
      CHECK(std::fabs(d.analytic - d.finite_difference) <= 2e-4 * scale + 1e-12);
    }
  }
}

TEST_CASE("d/d delta signs per kernel") {
  // Gauss: nonnegative at every N (summand ordering)
  const EnergyParams g = make(KernelSpec::gauss(0.5), 0.3);
  for (int n : {1, 2, 3, 8, 20}) {
    CHECK(d_delta_of_delta_n_f(n, g, 5e-4).value >= -1e-12);
  }
  // screened Poisson: d/d delta lambda^{-1} = -(delta+n^2)^{-2}, increasing in
  // n, so the difference series is nonnegative
  const EnergyParams s = make(KernelSpec::screened_poisson(1.0), 0.3);
  for (int n : {1, 2, 3, 8, 20}) {
    CHECK(d_delta_of_delta_n_f(n, s, 1e-4).value >= -1e-12);
  }
  // power alpha = 2.5 at large N: nonpositive
  const EnergyParams p = make(KernelSpec::power(2.5, 0.5), 0.3);
  for (int n : {20, 40, 80}) {
    CHECK(d_delta_of_delta_n_f(n, p, 5e-4).value <= 1e-12);
  }
}

TEST_CASE("cumulative delta difference") {
  EnergyParams loc = make(KernelSpec::local_laplacian(), 0.3);
  for (int n : {1, 3, 9}) CHECK(cumulative_delta_n_f(n, loc) == 0.0);

  const EnergyParams g = make(KernelSpec::gauss(0.5), 0.3);
  for (int n : {1, 2, 5, 15}) CHECK(cumulative_delta_n_f(n, g) >= -1e-14);

  const EnergyParams p = make(KernelSpec::power(2.5, 0.5), 0.3);
  for (int n : {20, 40, 80}) CHECK(cumulative_delta_n_f(n, p) <= 1e-14);
}

TEST_CASE("spectrum table matches direct evaluation") {
  SpectrumTable table(KernelSpec::power(2.5, 0.4));
  table.ensure(300, Exec::Parallel);
  const EnergyParams p = make(KernelSpec::power(2.5, 0.4), 0.25, 1.0, 100);
  for (int n : {1, 2, 3}) {
    const RepulsionValue direct = repulsion_f(static_cast<double>(n), p);
    const RepulsionValue fast = repulsion_f(n, p, table);
    CHECK(direct.value == fast.value);  // identical summation order
    CHECK(direct.tail_bound == fast.tail_bound);
  }
}

TEST_CASE("energy params validation") {
  EnergyParams p = make(KernelSpec::constant(0.3), 0.3);
  p.omega = 0.6;
  CHECK_THROWS_AS(p.validate(), ParameterDomainError);
  p.omega = 0.5;
  CHECK_NOTHROW(p.validate());
  p.truncation_m = 0;
  CHECK_THROWS_AS(p.validate(), ParameterDomainError);
  p.truncation_m = 10;
  CHECK_THROWS_AS(repulsion_f(0.5, p), ParameterDomainError);
}
