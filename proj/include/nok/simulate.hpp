#ifndef NOK_SIMULATE_HPP
#define NOK_SIMULATE_HPP

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "nok/fft.hpp"
#include "nok/kernels.hpp"

namespace nok {

// L2 gradient flow of the diffuse-interface energy on [0, 2pi): Fourier
// spectral in space, semi-implicit BDF2 in time (implicit diffusion,
// extrapolated double-well and nonlocal terms), bootstrapped by one
// backward-Euler step.
struct SolverConfig {
  int grid_points = 1024;  // power of two
  double epsilon = 0.0;    // interface width; <= 0 selects 10 * dx
  double dt = 1e-3;
  double gamma = 0.0;
  double omega = 0.2;  // mean of u, in (0,1)
  KernelSpec kernel;
  long max_steps = 2000000;
  double steady_tol = 1e-7;  // on ||u_new - u_old||_inf / dt
  unsigned long long seed = 1234;
  double noise_amp = 0.1;
  bool dealias = false;      // 2/3-rule truncation of the nonlinear term
  bool linear_only = false;  // heat equation only (testing hook)

  double dx() const;
  double eps() const;  // resolved epsilon
  void validate() const;
};

struct FieldState {
  std::vector<double> u;
  double time = 0.0;
  long step = 0;
  double energy = 0.0;
};

struct ConvergenceReport {
  bool converged = false;
  long steps_taken = 0;
  double final_residual = 0.0;
  // energy dissipation bookkeeping (per-step tolerance 1e-9)
  long energy_violations = 0;
  double max_energy_increase = 0.0;
};

struct BubbleProfile {
  int count = 0;
  bool full_cover = false;
  std::vector<std::pair<double, double>> intervals;  // (start, end), end may wrap past 2pi
  std::vector<double> widths;
  std::vector<double> gaps;  // circular center-to-center spacings
  double total_width = 0.0;
  double width_cv = 0.0;
  double gap_cv = 0.0;
};

// u = omega + noise_amp * xi, xi iid uniform on [-1,1] from the seed, then
// mean-corrected so mean(u) = omega exactly.
FieldState init_random(const SolverConfig& config);

BubbleProfile detect_bubbles(const std::vector<double>& u, double threshold = 0.5);

class Simulator {
 public:
  explicit Simulator(const SolverConfig& config);

  const SolverConfig& config() const { return config_; }

  // epsilon*u_xx - (1/eps) W'(u) - gamma * Linv(u - mean(u)) in physical space.
  std::vector<double> rhs(const std::vector<double>& u);

  // One time step (backward Euler on the first call, BDF2 afterwards).
  // Updates state in place, including its energy.
  void advance(FieldState& state);

  // Step until the steady tolerance or max_steps. on_sample, when given, is
  // called after every step.
  ConvergenceReport evolve(FieldState& state,
                           const std::function<void(const FieldState&)>& on_sample = {});

  double energy(const std::vector<double>& u);

  void reset_history();  // next advance() bootstraps again

 private:
  SolverConfig config_;
  RealFft fft_;
  std::vector<double> inv_lambda_;  // 1/lambda(n), 0 at n = 0
  std::vector<double> n_sq_;
  bool have_history_ = false;
  std::vector<std::complex<double>> hat_prev_, hat_curr_, hat_star_, hat_work_;
  std::vector<double> u_prev_, u_star_, w_prime_, scratch_;
};

// Convenience one-shot wrappers matching the operation contracts.
std::vector<double> rhs_spectral(const std::vector<double>& u, const SolverConfig& config);
FieldState step_bdf2(const FieldState& state, const SolverConfig& config);
double energy_diffuse(const std::vector<double>& u, const SolverConfig& config);

double double_well(double u);        // W(u) = 18 (u^2 - u)^2
double double_well_prime(double u);  // W'(u) = 36 (2u^3 - 3u^2 + u)

// The equal-size equal-distance N-bubble step function sampled on the grid.
std::vector<double> sample_equal_bubbles(int grid_points, int big_n, double omega);

}  // namespace nok

#endif
