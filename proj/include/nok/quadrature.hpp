#ifndef NOK_QUADRATURE_HPP
#define NOK_QUADRATURE_HPP

#include <cmath>
#include <utility>

namespace nok::quad {

struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
};

namespace detail {

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
inline constexpr double kKronrodNodes[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};

inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};

inline constexpr double kGaussWeights[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

}  // namespace detail

// One Gauss-Kronrod 7/15 panel on [a,b]; abs_error is the usual |K15-G7|
// estimate. The embedded Gauss-7 rule lives on the odd-indexed Kronrod
// nodes plus the center.
template <typename F>
Estimate gk15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = detail::kKronrodWeights[7] * fc;
  double gauss = detail::kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * detail::kKronrodNodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += detail::kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += detail::kGaussWeights[i / 2] * fsum;
  }
  return {kronrod * half, std::fabs(kronrod - gauss) * half};
}

// Adaptive bisection driven by the GK15 error estimate.
template <typename F>
Estimate adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                  int max_depth = 24) {
  Estimate whole = gk15(f, a, b);
  if (max_depth <= 0 ||
      whole.abs_error <=
          std::max(abs_tol, rel_tol * std::fabs(whole.value))) {
    return whole;
  }
  const double mid = 0.5 * (a + b);
  Estimate left = adaptive(f, a, mid, rel_tol, 0.5 * abs_tol, max_depth - 1);
  Estimate right = adaptive(f, mid, b, rel_tol, 0.5 * abs_tol, max_depth - 1);
  return {left.value + right.value, left.abs_error + right.abs_error};
}

}  // namespace nok::quad

#endif
