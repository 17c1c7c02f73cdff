#include "nok/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nok/errors.hpp"

namespace nok {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEnergyStepTol = 1e-9;

double uniform_symmetric(std::mt19937_64& rng) {
  // top 53 bits -> [0,1), affine to [-1,1); identical on every platform
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

double SolverConfig::dx() const { return kTwoPi / grid_points; }

double SolverConfig::eps() const { return epsilon > 0.0 ? epsilon : 10.0 * dx(); }

void SolverConfig::validate() const {
  kernel.validate();
  if (grid_points < 4 || (grid_points & (grid_points - 1)) != 0) {
    throw ParameterDomainError("grid_points must be a power of two >= 4");
  }
  if (!(dt > 0.0)) throw ParameterDomainError("dt must be > 0");
  if (!(steady_tol > 0.0)) throw ParameterDomainError("steady_tol must be > 0");
  if (!(omega > 0.0 && omega < 1.0)) throw ParameterDomainError("omega must lie in (0,1)");
  if (!(eps() > 0.0)) throw ParameterDomainError("epsilon must be > 0");
  if (noise_amp < 0.0) throw ParameterDomainError("noise_amp must be >= 0");
  if (max_steps < 0) throw ParameterDomainError("max_steps must be >= 0");
  if (!(gamma >= 0.0)) throw ParameterDomainError("gamma must be >= 0");
}

double double_well(double u) {
  const double q = u * u - u;
  return 18.0 * q * q;
}

double double_well_prime(double u) {
  return 36.0 * (2.0 * u * u * u - 3.0 * u * u + u);
}

FieldState init_random(const SolverConfig& config) {
  config.validate();
  FieldState state;
  state.u.resize(config.grid_points);
  std::mt19937_64 rng(config.seed);
  for (double& v : state.u) {
    v = config.omega + config.noise_amp * uniform_symmetric(rng);
  }
  double mean = 0.0;
  for (double v : state.u) mean += v;
  mean /= config.grid_points;
  for (double& v : state.u) v += config.omega - mean;
  return state;
}

Simulator::Simulator(const SolverConfig& config)
    : config_(config), fft_(config.grid_points) {
  config_.validate();
  const int modes = fft_.modes();
  inv_lambda_.assign(modes, 0.0);
  n_sq_.assign(modes, 0.0);
  for (int n = 1; n < modes; ++n) {
    n_sq_[n] = static_cast<double>(n) * n;
    const double lam = eigenvalue(config_.kernel, static_cast<double>(n));
    if (!(lam > 0.0)) {
      throw SingularModeError("kernel eigenvalue vanishes on a nonzero mode");
    }
    inv_lambda_[n] = 1.0 / lam;
  }
}

void Simulator::reset_history() { have_history_ = false; }

std::vector<double> Simulator::rhs(const std::vector<double>& u) {
  const double eps = config_.eps();
  fft_.forward(u, hat_work_);
  std::vector<std::complex<double>> lap_hat(hat_work_.size());
  for (std::size_t n = 0; n < hat_work_.size(); ++n) {
    lap_hat[n] = -n_sq_[n] * hat_work_[n];
  }
  std::vector<double> out;
  fft_.inverse(lap_hat, out);
  for (double& v : out) v *= eps;
  if (config_.linear_only) return out;

  if (config_.gamma != 0.0) {
    std::vector<std::complex<double>> g_hat(hat_work_.size());
    g_hat[0] = 0.0;
    for (std::size_t n = 1; n < hat_work_.size(); ++n) {
      g_hat[n] = inv_lambda_[n] * hat_work_[n];
    }
    fft_.inverse(g_hat, scratch_);
    for (int j = 0; j < config_.grid_points; ++j) {
      out[j] -= config_.gamma * scratch_[j];
    }
  }
  for (int j = 0; j < config_.grid_points; ++j) {
    out[j] -= double_well_prime(u[j]) / eps;
  }
  return out;
}

double Simulator::energy(const std::vector<double>& u) {
  fft_.forward(u, hat_work_);
  const double eps = config_.eps();
  const int last = fft_.modes() - 1;
  double interfacial = 0.0;
  double nonlocal = 0.0;
  for (int n = 1; n <= last; ++n) {
    const double weight = (n == last) ? 1.0 : 2.0;
    const double mag2 = std::norm(hat_work_[n]);
    interfacial += weight * n_sq_[n] * mag2;
    nonlocal += weight * inv_lambda_[n] * mag2;
  }
  double potential = 0.0;
  for (double v : u) potential += double_well(v);
  return 0.5 * eps * kTwoPi * interfacial +
         potential / eps * (kTwoPi / config_.grid_points) +
         0.5 * config_.gamma * kTwoPi * nonlocal;
}

void Simulator::advance(FieldState& state) {
  const int J = config_.grid_points;
  const double eps = config_.eps();
  const double dt = config_.dt;
  const int modes = fft_.modes();

  if (!have_history_) {
    fft_.forward(state.u, hat_curr_);
    u_prev_ = state.u;
    hat_prev_ = hat_curr_;
  }

  // extrapolated state for the explicit terms: u itself on the bootstrap
  // Euler step, 2u^k - u^{k-1} under BDF2
  const bool euler = !have_history_;
  if (euler) {
    u_star_ = state.u;
    hat_star_ = hat_curr_;
  } else {
    u_star_.resize(J);
    for (int j = 0; j < J; ++j) u_star_[j] = 2.0 * state.u[j] - u_prev_[j];
    hat_star_.resize(modes);
    for (int n = 0; n < modes; ++n) {
      hat_star_[n] = 2.0 * hat_curr_[n] - hat_prev_[n];
    }
  }

  std::vector<std::complex<double>> nonlin_hat(modes, 0.0);
  if (!config_.linear_only) {
    w_prime_.resize(J);
    for (int j = 0; j < J; ++j) w_prime_[j] = double_well_prime(u_star_[j]) / eps;
    fft_.forward(w_prime_, nonlin_hat);
    if (config_.dealias) {
      const int cutoff = J / 3;
      for (int n = cutoff + 1; n < modes; ++n) nonlin_hat[n] = 0.0;
    }
    if (config_.gamma != 0.0) {
      for (int n = 1; n < modes; ++n) {
        nonlin_hat[n] += config_.gamma * inv_lambda_[n] * hat_star_[n];
      }
    }
  }

  hat_work_.resize(modes);
  if (euler) {
    for (int n = 0; n < modes; ++n) {
      const double denom = 1.0 / dt + eps * n_sq_[n];
      hat_work_[n] = (hat_curr_[n] / dt - nonlin_hat[n]) / denom;
    }
  } else {
    for (int n = 0; n < modes; ++n) {
      const double denom = 1.5 / dt + eps * n_sq_[n];
      hat_work_[n] = ((4.0 * hat_curr_[n] - hat_prev_[n]) / (2.0 * dt) - nonlin_hat[n]) / denom;
    }
  }
  // volume constraint: project the mean back to omega
  hat_work_[0] = std::complex<double>(config_.omega, 0.0);

  std::vector<double> u_new;
  fft_.inverse(hat_work_, u_new);
  for (double v : u_new) {
    if (!std::isfinite(v)) {
      throw DivergenceError("time stepping diverged; try a smaller dt");
    }
  }

  u_prev_ = std::move(state.u);
  hat_prev_ = hat_curr_;
  hat_curr_ = hat_work_;
  state.u = std::move(u_new);
  state.time += dt;
  state.step += 1;
  state.energy = energy(state.u);
  have_history_ = true;
}

ConvergenceReport Simulator::evolve(FieldState& state,
                                    const std::function<void(const FieldState&)>& on_sample) {
  ConvergenceReport report;
  state.energy = energy(state.u);
  double prev_energy = state.energy;
  std::vector<double> u_old;
  for (long k = 0; k < config_.max_steps; ++k) {
    u_old = state.u;
    advance(state);
    ++report.steps_taken;

    double residual = 0.0;
    for (int j = 0; j < config_.grid_points; ++j) {
      residual = std::max(residual, std::fabs(state.u[j] - u_old[j]));
    }
    residual /= config_.dt;
    report.final_residual = residual;

    const double increase = state.energy - prev_energy;
    if (increase > kEnergyStepTol) {
      ++report.energy_violations;
      report.max_energy_increase = std::max(report.max_energy_increase, increase);
    }
    prev_energy = state.energy;

    if (on_sample) on_sample(state);
    if (residual < config_.steady_tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

std::vector<double> rhs_spectral(const std::vector<double>& u, const SolverConfig& config) {
  Simulator sim(config);
  return sim.rhs(u);
}

FieldState step_bdf2(const FieldState& state, const SolverConfig& config) {
  Simulator sim(config);
  FieldState next = state;
  sim.advance(next);  // bootstrap Euler when no history is available
  return next;
}

double energy_diffuse(const std::vector<double>& u, const SolverConfig& config) {
  Simulator sim(config);
  return sim.energy(u);
}

std::vector<double> sample_equal_bubbles(int grid_points, int big_n, double omega) {
  std::vector<double> u(grid_points);
  const double period = kTwoPi / big_n;
  const double width = kTwoPi * omega / big_n;
  for (int j = 0; j < grid_points; ++j) {
    const double x = kTwoPi * j / grid_points;
    u[j] = std::fmod(x, period) < width ? 1.0 : 0.0;
  }
  return u;
}

BubbleProfile detect_bubbles(const std::vector<double>& u, double threshold) {
  const int J = static_cast<int>(u.size());
  BubbleProfile profile;
  if (J == 0) return profile;
  const double dx = kTwoPi / J;

  bool any_above = false;
  bool all_above = true;
  for (double v : u) {
    if (!std::isfinite(v)) throw ParameterDomainError("field must be finite");
    any_above = any_above || v > threshold;
    all_above = all_above && v > threshold;
  }
  if (!any_above) return profile;
  if (all_above) {
    profile.count = 1;
    profile.full_cover = true;
    profile.intervals = {{0.0, kTwoPi}};
    profile.widths = {kTwoPi};
    profile.gaps = {kTwoPi};
    profile.total_width = kTwoPi;
    return profile;
  }

  std::vector<double> ups;
  std::vector<double> downs;
  for (int j = 0; j < J; ++j) {
    const double a = u[j];
    const double b = u[(j + 1) % J];
    const double xj = j * dx;
    if (a <= threshold && b > threshold) {
      ups.push_back(xj + dx * (threshold - a) / (b - a));
    } else if (a > threshold && b <= threshold) {
      downs.push_back(xj + dx * (threshold - a) / (b - a));
    }
  }

  profile.count = static_cast<int>(ups.size());
  std::vector<double> centers;
  for (double start : ups) {
    auto it = std::upper_bound(downs.begin(), downs.end(), start);
    const double end = (it != downs.end()) ? *it : downs.front() + kTwoPi;
    const double width = end - start;
    profile.intervals.emplace_back(start, end);
    profile.widths.push_back(width);
    profile.total_width += width;
    centers.push_back(std::fmod(start + 0.5 * width, kTwoPi));
  }

  std::sort(centers.begin(), centers.end());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double next = (i + 1 < centers.size()) ? centers[i + 1] : centers[0] + kTwoPi;
    profile.gaps.push_back(next - centers[i]);
  }

  auto coeff_of_variation = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= v.size();
    return mean != 0.0 ? std::sqrt(var) / mean : 0.0;
  };
  profile.width_cv = coeff_of_variation(profile.widths);
  profile.gap_cv = coeff_of_variation(profile.gaps);
  return profile;
}

}  // namespace nok
