// noklab: analysis CLI for the 1D nonlocal Ohta-Kawasaki pipeline.
// Subcommands: eig, alpha-star, energy, nstar, delta-effect, simulate.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nok/csv.hpp"
#include "nok/energy.hpp"
#include "nok/errors.hpp"
#include "nok/kernels.hpp"
#include "nok/optimize.hpp"
#include "nok/parallel.hpp"
#include "nok/simulate.hpp"

namespace fs = std::filesystem;
using nok::format_double;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct KernelFlags {
  std::string family = "constant";
  double alpha = 2.0;
  double delta = 0.5;
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& kf) {
  cmd->add_option("--kernel", kf.family, "kernel family")
      ->check(CLI::IsMember({"power", "constant", "gauss", "screened", "laplacian"}))
      ->capture_default_str();
  cmd->add_option("--alpha", kf.alpha, "power kernel exponent, in (0,3) excluding 1")
      ->capture_default_str();
  cmd->add_option("--delta", kf.delta,
                  "nonlocal horizon in (0,pi] (screening constant for --kernel screened)")
      ->capture_default_str();
}

nok::KernelSpec make_kernel(const KernelFlags& kf) {
  if (kf.family == "power") return nok::KernelSpec::power(kf.alpha, kf.delta);
  if (kf.family == "constant") return nok::KernelSpec::constant(kf.delta);
  if (kf.family == "gauss") return nok::KernelSpec::gauss(kf.delta);
  if (kf.family == "screened") return nok::KernelSpec::screened_poisson(kf.delta);
  return nok::KernelSpec::local_laplacian();
}

// delta = 0 entries of a --deltas list mean the local (lambda = n^2) baseline
nok::KernelSpec kernel_at_delta(const KernelFlags& kf, double delta) {
  if (delta == 0.0 && kf.family != "screened") return nok::KernelSpec::local_laplacian();
  KernelFlags at = kf;
  at.delta = delta;
  return make_kernel(at);
}

struct Manifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> outputs;
  std::string error;

  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void add(const std::string& key, const std::string& value) {
    parameters.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, format_double(value)); }
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }

  void write(const std::string& path) const {
    std::ofstream os(path);
    nok::write_key_value(os, "subcommand", subcommand);
    nok::write_key_value(os, "tool_version", NOKLAB_VERSION);
    for (const auto& [k, v] : parameters) nok::write_key_value(os, "param." + k, v);
    for (const std::string& out : outputs) nok::write_key_value(os, "output", out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nok::write_key_value(os, "wall_time_s", format_double(wall));
    nok::write_key_value(os, "status", error.empty() ? "ok" : "error");
    if (!error.empty()) nok::write_key_value(os, "error", error);
  }
};

std::string manifest_path_for(const std::string& out) { return out + ".manifest"; }

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path);
  if (!file) throw nok::ParameterDomainError("cannot open output file: " + path);
  return file;
}

std::vector<double> parse_delta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw nok::ParameterDomainError("--deltas list is empty");
  return out;
}

int run_eig(const KernelFlags& kf, double nmax, bool continuum, int points,
            const std::string& out) {
  Manifest man;
  man.subcommand = "eig";
  man.add("kernel", kf.family);
  man.add("alpha", kf.alpha);
  man.add("delta", kf.delta);
  man.add("nmax", nmax);
  man.add("continuum", std::string(continuum ? "true" : "false"));
  try {
    const nok::KernelSpec kernel = make_kernel(kf);
    const nok::EigenvalueLimit limit = nok::eigenvalue_limit(kernel);
    std::ofstream file;
    std::ostream& os = open_output(out, file);
    os << "n,lambda,lambda_inf\n";
    const std::string inf_cell = limit.finite ? format_double(limit.value) : "";
    auto emit = [&](double n) {
      nok::write_csv_row(os, {format_double(n), format_double(nok::eigenvalue(kernel, n)),
                              inf_cell});
    };
    if (continuum) {
      for (int i = 0; i <= points; ++i) emit(nmax * i / points);
    } else {
      for (int n = 0; n <= static_cast<int>(nmax); ++n) emit(n);
    }
    if (out != "-") {
      man.outputs.push_back(out);
      man.write(manifest_path_for(out));
    }
    return 0;
  } catch (...) {
    if (out != "-") {
      man.error = "eigenvalue computation failed";
      man.write(manifest_path_for(out));
    }
    throw;
  }
}

int run_alpha_star(double tol) {
  const double astar = nok::alpha_star(tol);
  std::cout << "alpha_star=" << format_double(astar) << "\n";
  std::cout << "tol=" << format_double(tol) << "\n";
  const double lo = std::max(0.2, astar - tol);
  const double hi = std::min(0.4, astar + tol);
  std::cout << "g_bracket_low="
            << format_double(nok::cos_power_integral(1.5 * std::numbers::pi, lo)) << "\n";
  std::cout << "g_bracket_high="
            << format_double(nok::cos_power_integral(1.5 * std::numbers::pi, hi)) << "\n";
  return 0;
}

int run_energy(const KernelFlags& kf, double omega, double gamma, double nmin, double nmax,
               bool continuum, int points, int truncation, const std::string& out) {
  Manifest man;
  man.subcommand = "energy";
  man.add("kernel", kf.family);
  man.add("alpha", kf.alpha);
  man.add("delta", kf.delta);
  man.add("omega", omega);
  man.add("gamma", gamma);
  try {
    nok::EnergyParams params;
    params.kernel = make_kernel(kf);
    params.omega = omega;
    params.gamma = gamma;
    params.truncation_m = truncation;
    params.validate();
    const nok::SeriesLimit fi = nok::f_infinity(params);
    std::ofstream file;
    std::ostream& os = open_output(out, file);
    os << "N,E_att,E_rep,E_tot,F,F_inf\n";
    auto emit = [&](double n) {
      const nok::EnergyBreakdown e = nok::total_energy(n, params);
      const nok::RepulsionValue f = nok::repulsion_f(n, params);
      nok::write_csv_row(os, {format_double(n), format_double(e.attraction),
                              format_double(e.repulsion), format_double(e.total),
                              format_double(f.value), format_double(fi.value)});
    };
    if (continuum) {
      for (int i = 0; i <= points; ++i) emit(nmin + (nmax - nmin) * i / points);
    } else {
      for (int n = static_cast<int>(nmin); n <= static_cast<int>(nmax); ++n) emit(n);
    }
    if (out != "-") {
      man.outputs.push_back(out);
      man.write(manifest_path_for(out));
    }
    return 0;
  } catch (...) {
    if (out != "-") {
      man.error = "energy computation failed";
      man.write(manifest_path_for(out));
    }
    throw;
  }
}

int run_nstar(const KernelFlags& kf, double omega, double gamma_min, double gamma_max,
              int gamma_points, const std::string& deltas, int scan_cap,
              const std::string& out) {
  Manifest man;
  man.subcommand = "nstar";
  man.add("kernel", kf.family);
  man.add("omega", omega);
  try {
    std::vector<double> delta_list;
    if (deltas.empty()) {
      delta_list.push_back(kf.family == "laplacian" ? 0.0 : kf.delta);
    } else {
      delta_list = parse_delta_list(deltas);
    }
    const std::vector<double> grid = nok::log_grid(gamma_min, gamma_max, gamma_points);
    std::ofstream file;
    std::ostream& os = open_output(out, file);
    os << "gamma,delta,n_star,bounded\n";
    for (double delta : delta_list) {
      const nok::KernelSpec kernel = kernel_at_delta(kf, delta);
      const int cap = scan_cap > 0 ? scan_cap : nok::default_scan_cap(kernel);
      const nok::SweepResult sweep = nok::gamma_sweep(kernel, omega, grid, cap);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        nok::write_csv_row(os, {format_double(grid[i]), format_double(delta),
                                std::to_string(sweep.n_star_values[i]),
                                sweep.bounded ? "1" : "0"});
      }
    }
    if (out != "-") {
      man.outputs.push_back(out);
      man.write(manifest_path_for(out));
    }
    return 0;
  } catch (...) {
    if (out != "-") {
      man.error = "nstar sweep failed";
      man.write(manifest_path_for(out));
    }
    throw;
  }
}

int run_delta_effect(const KernelFlags& kf, double omega, double gamma,
                     const std::string& deltas, int scan_cap, const std::string& out) {
  Manifest man;
  man.subcommand = "delta-effect";
  man.add("kernel", kf.family);
  man.add("omega", omega);
  man.add("gamma", gamma);
  try {
    const std::vector<double> delta_list = parse_delta_list(deltas);
    const nok::KernelSpec base = make_kernel(kf);
    const nok::DeltaEffectReport rep =
        nok::delta_effect_report(base, omega, gamma, delta_list, scan_cap);
    std::cout << "mode=" << nok::mode_name(rep.mode) << "\n";
    std::cout << "n_star_local=" << rep.n_star_local << "\n";
    for (const nok::DeltaEffectRow& row : rep.rows) {
      std::cout << "delta=" << format_double(row.delta) << " n_star=" << row.n_star
                << " instant=" << nok::mode_name(row.instant)
                << " cumulative=" << nok::mode_name(row.cumulative) << "\n";
    }
    std::ofstream file;
    std::ostream& os = open_output(out, file);
    os << "delta,n_star,n_star_local,d_delta_nm1,d_delta_n,cum_nm1,cum_n,instant,"
          "cumulative,mode\n";
    for (const nok::DeltaEffectRow& row : rep.rows) {
      nok::write_csv_row(
          os, {format_double(row.delta), std::to_string(row.n_star),
               std::to_string(row.n_star_local), format_double(row.d_delta_at_nm1),
               format_double(row.d_delta_at_n), format_double(row.cumulative_at_nm1),
               format_double(row.cumulative_at_n), nok::mode_name(row.instant),
               nok::mode_name(row.cumulative), nok::mode_name(row.mode)});
    }
    if (out != "-") {
      man.outputs.push_back(out);
      man.write(manifest_path_for(out));
    }
    return 0;
  } catch (...) {
    if (out != "-") {
      man.error = "delta-effect analysis failed";
      man.write(manifest_path_for(out));
    }
    throw;
  }
}

struct SimulateFlags {
  KernelFlags kernel;
  double omega = 0.2;
  double gamma = 0.0;
  int grid = 1024;
  double epsilon = 0.0;
  double dt = 1e-3;
  long max_steps = 2000000;
  double steady_tol = 1e-7;
  unsigned long long seed = 1234;
  double noise_amp = 0.1;
  bool dealias = false;
  long snapshot_every = 0;
  long sample_every = 100;
  double threshold = 0.5;
  std::string outdir;
};

void write_field_csv(const std::string& path, const std::vector<double>& u) {
  std::ofstream os(path);
  os << "x,u\n";
  const double dx = 2.0 * std::numbers::pi / u.size();
  for (std::size_t j = 0; j < u.size(); ++j) {
    nok::write_csv_row(os, {format_double(j * dx), format_double(u[j])});
  }
}

int run_simulate(const SimulateFlags& sf) {
  Manifest man;
  man.subcommand = "simulate";
  fs::create_directories(sf.outdir);
  const std::string manifest_file = (fs::path(sf.outdir) / "manifest.txt").string();

  nok::SolverConfig config;
  config.kernel = make_kernel(sf.kernel);
  config.omega = sf.omega;
  config.gamma = sf.gamma;
  config.grid_points = sf.grid;
  config.epsilon = sf.epsilon;
  config.dt = sf.dt;
  config.max_steps = sf.max_steps;
  config.steady_tol = sf.steady_tol;
  config.seed = sf.seed;
  config.noise_amp = sf.noise_amp;
  config.dealias = sf.dealias;

  man.add("kernel", sf.kernel.family);
  man.add("alpha", sf.kernel.alpha);
  man.add("delta", sf.kernel.delta);
  man.add("omega", sf.omega);
  man.add("gamma", sf.gamma);
  man.add("grid", static_cast<long long>(sf.grid));
  man.add("seed", static_cast<long long>(sf.seed));

  try {
    config.validate();

    {
      std::ofstream cfg(fs::path(sf.outdir) / "config.txt");
      nok::write_key_value(cfg, "kernel", sf.kernel.family);
      nok::write_key_value(cfg, "alpha", format_double(sf.kernel.alpha));
      nok::write_key_value(cfg, "delta", format_double(sf.kernel.delta));
      nok::write_key_value(cfg, "omega", format_double(sf.omega));
      nok::write_key_value(cfg, "gamma", format_double(sf.gamma));
      nok::write_key_value(cfg, "grid", std::to_string(sf.grid));
      nok::write_key_value(cfg, "epsilon", format_double(config.eps()));
      nok::write_key_value(cfg, "dt", format_double(sf.dt));
      nok::write_key_value(cfg, "max_steps", std::to_string(sf.max_steps));
      nok::write_key_value(cfg, "steady_tol", format_double(sf.steady_tol));
      nok::write_key_value(cfg, "seed", std::to_string(sf.seed));
      nok::write_key_value(cfg, "noise_amp", format_double(sf.noise_amp));
      nok::write_key_value(cfg, "dealias", sf.dealias ? "true" : "false");
      man.outputs.push_back((fs::path(sf.outdir) / "config.txt").string());
    }

    nok::Simulator sim(config);
    nok::FieldState state = nok::init_random(config);

    const std::string traj_path = (fs::path(sf.outdir) / "trajectory.csv").string();
    std::ofstream traj(traj_path);
    traj << "step,time,energy,bubbles\n";
    man.outputs.push_back(traj_path);

    auto sample_row = [&](const nok::FieldState& s) {
      nok::write_csv_row(traj,
                         {std::to_string(s.step), format_double(s.time),
                          format_double(s.energy),
                          std::to_string(nok::detect_bubbles(s.u, sf.threshold).count)});
    };

    auto snapshot = [&](const nok::FieldState& s) {
      char name[64];
      std::snprintf(name, sizeof(name), "snapshot_%09ld.csv", s.step);
      const std::string path = (fs::path(sf.outdir) / name).string();
      write_field_csv(path, s.u);
      man.outputs.push_back(path);
    };

    const nok::ConvergenceReport rep = sim.evolve(state, [&](const nok::FieldState& s) {
      if (sf.sample_every > 0 && s.step % sf.sample_every == 0) sample_row(s);
      if (sf.snapshot_every > 0 && s.step % sf.snapshot_every == 0) snapshot(s);
    });
    sample_row(state);

    const std::string final_path = (fs::path(sf.outdir) / "final_state.csv").string();
    write_field_csv(final_path, state.u);
    man.outputs.push_back(final_path);

    const nok::BubbleProfile profile = nok::detect_bubbles(state.u, sf.threshold);
    const std::string profile_path = (fs::path(sf.outdir) / "profile.txt").string();
    {
      std::ofstream pf(profile_path);
      nok::write_key_value(pf, "converged", rep.converged ? "true" : "false");
      nok::write_key_value(pf, "steps", std::to_string(rep.steps_taken));
      nok::write_key_value(pf, "final_residual", format_double(rep.final_residual));
      nok::write_key_value(pf, "energy", format_double(state.energy));
      nok::write_key_value(pf, "energy_violations", std::to_string(rep.energy_violations));
      nok::write_key_value(pf, "bubbles", std::to_string(profile.count));
      nok::write_key_value(pf, "full_cover", profile.full_cover ? "true" : "false");
      nok::write_key_value(pf, "width_cv", format_double(profile.width_cv));
      nok::write_key_value(pf, "gap_cv", format_double(profile.gap_cv));
      nok::write_key_value(pf, "total_width", format_double(profile.total_width));
      man.outputs.push_back(profile_path);
    }

    std::cout << "converged=" << (rep.converged ? "true" : "false")
              << " steps=" << rep.steps_taken << " bubbles=" << profile.count
              << " width_cv=" << format_double(profile.width_cv)
              << " gap_cv=" << format_double(profile.gap_cv)
              << " energy=" << format_double(state.energy) << "\n";

    man.write(manifest_file);
    return 0;
  } catch (const std::exception& e) {
    man.error = e.what();
    man.write(manifest_file);
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D nonlocal Ohta-Kawasaki analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NOKLAB_VERSION);

  int jobs = 0;
  app.add_option("--jobs", jobs, "max worker threads (default: NOKLAB_JOBS env or all cores)");

  KernelFlags eig_kernel;
  double eig_nmax = 400.0;
  bool eig_continuum = false;
  int eig_points = 2000;
  std::string eig_out = "-";
  CLI::App* eig = app.add_subcommand("eig", "eigenvalues lambda(n) of the nonlocal operator");
  add_kernel_flags(eig, eig_kernel);
  eig->add_option("--nmax", eig_nmax, "largest mode number")->capture_default_str();
  eig->add_flag("--continuum", eig_continuum, "dense real-valued n grid instead of integers");
  eig->add_option("--points", eig_points, "grid points for --continuum")->capture_default_str();
  eig->add_option("--out", eig_out, "output CSV path ('-' for stdout)")->capture_default_str();

  double tol = 1e-8;
  CLI::App* astar = app.add_subcommand("alpha-star", "critical power-kernel exponent by bisection");
  astar->add_option("--tol", tol, "bisection tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  KernelFlags en_kernel;
  double en_omega = 0.3;
  double en_gamma = 1.0;
  double en_nmin = 1.0;
  double en_nmax = 30.0;
  bool en_continuum = false;
  int en_points = 2000;
  int en_trunc = 500;
  std::string en_out = "-";
  CLI::App* energy = app.add_subcommand("energy", "sharp-interface energy E_tot(N) and F(N)");
  add_kernel_flags(energy, en_kernel);
  energy->add_option("--omega", en_omega, "relative volume in (0, 1/2]")->capture_default_str();
  energy->add_option("--gamma", en_gamma, "repulsion strength")->capture_default_str();
  energy->add_option("--nmin", en_nmin, "first N")->capture_default_str();
  energy->add_option("--nmax", en_nmax, "last N")->capture_default_str();
  energy->add_flag("--continuum", en_continuum, "dense real-valued N grid");
  energy->add_option("--points", en_points, "grid points for --continuum")->capture_default_str();
  energy->add_option("--truncation", en_trunc, "series cutoff M")->capture_default_str();
  energy->add_option("--out", en_out, "output CSV path ('-' for stdout)")->capture_default_str();

  KernelFlags ns_kernel;
  double ns_omega = 0.3;
  double ns_gmin = 1.0;
  double ns_gmax = 1e6;
  int ns_gpoints = 50;
  std::string ns_deltas;
  int ns_cap = 0;
  std::string ns_out = "-";
  CLI::App* nstar = app.add_subcommand("nstar", "optimal bubble count staircase over gamma");
  add_kernel_flags(nstar, ns_kernel);
  nstar->add_option("--omega", ns_omega, "relative volume in (0, 1/2]")->capture_default_str();
  nstar->add_option("--gamma-min", ns_gmin, "first gamma")->capture_default_str();
  nstar->add_option("--gamma-max", ns_gmax, "last gamma")->capture_default_str();
  nstar->add_option("--gamma-points", ns_gpoints, "log-grid points")->capture_default_str();
  nstar->add_option("--deltas", ns_deltas,
                    "comma list of delta values (0 = local laplacian baseline); default: --delta");
  nstar->add_option("--scan-cap", ns_cap, "N scan cap (0 = automatic)")->capture_default_str();
  nstar->add_option("--out", ns_out, "output CSV path ('-' for stdout)")->capture_default_str();

  KernelFlags de_kernel;
  double de_omega = 0.3;
  double de_gamma = 1e4;
  std::string de_deltas = "0.5,1";
  int de_cap = 0;
  std::string de_out = "-";
  CLI::App* deff = app.add_subcommand("delta-effect",
                                      "promotion/demotion diagnostics of the horizon delta");
  add_kernel_flags(deff, de_kernel);
  deff->add_option("--omega", de_omega, "relative volume in (0, 1/2]")->capture_default_str();
  deff->add_option("--gamma", de_gamma, "repulsion strength")->capture_default_str();
  deff->add_option("--deltas", de_deltas, "ascending comma list of delta values")
      ->capture_default_str();
  deff->add_option("--scan-cap", de_cap, "N scan cap (0 = automatic)")->capture_default_str();
  deff->add_option("--out", de_out, "output CSV path ('-' for stdout)")->capture_default_str();

  SimulateFlags sf;
  CLI::App* simc = app.add_subcommand("simulate", "L2 gradient flow of the diffuse-interface model");
  simc->set_config("--config", "", "key=value config file ('#' comments); flags override");
  add_kernel_flags(simc, sf.kernel);
  simc->add_option("--omega", sf.omega, "mean of u, in (0,1)")->capture_default_str();
  simc->add_option("--gamma", sf.gamma, "repulsion strength")->capture_default_str();
  simc->add_option("--grid", sf.grid, "grid points (power of two)")->capture_default_str();
  simc->add_option("--epsilon", sf.epsilon, "interface width (0 = 10*dx)")->capture_default_str();
  simc->add_option("--dt", sf.dt, "time step")->capture_default_str();
  simc->add_option("--max-steps", sf.max_steps, "step limit")->capture_default_str();
  simc->add_option("--steady-tol", sf.steady_tol, "steady-state tolerance on |du|_inf/dt")
      ->capture_default_str();
  simc->add_option("--seed", sf.seed, "random seed")->capture_default_str();
  simc->add_option("--noise-amp", sf.noise_amp, "initial noise amplitude")->capture_default_str();
  simc->add_flag("--dealias", sf.dealias, "2/3-rule dealiasing of the nonlinear term");
  simc->add_option("--snapshot-every", sf.snapshot_every,
                   "write x,u snapshots every k steps (0 = final only)")
      ->capture_default_str();
  simc->add_option("--sample-every", sf.sample_every, "trajectory CSV row every k steps")
      ->capture_default_str();
  simc->add_option("--threshold", sf.threshold, "bubble detection threshold")
      ->capture_default_str();
  simc->add_option("--outdir", sf.outdir, "output directory (required)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (jobs > 0) nok::set_max_jobs(jobs);

  try {
    if (*eig) return run_eig(eig_kernel, eig_nmax, eig_continuum, eig_points, eig_out);
    if (*astar) return run_alpha_star(tol);
    if (*energy)
      return run_energy(en_kernel, en_omega, en_gamma, en_nmin, en_nmax, en_continuum,
                        en_points, en_trunc, en_out);
    if (*nstar)
      return run_nstar(ns_kernel, ns_omega, ns_gmin, ns_gmax, ns_gpoints, ns_deltas, ns_cap,
                       ns_out);
    if (*deff) return run_delta_effect(de_kernel, de_omega, de_gamma, de_deltas, de_cap, de_out);
    if (*simc) return run_simulate(sf);
  } catch (const nok::ParameterDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
