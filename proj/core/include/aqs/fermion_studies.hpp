#pragma once

#include <limits>
#include <vector>

#include "aqs/gaussian.hpp"

namespace aqs {

struct ChainParams {
  double k = 1.0;
  double j = 0.5;
  double lambda0 = 1.1;
  double lambda1 = 1.0;
  bool periodic = true;
};

QuadraticModel target_chain(int n, const ChainParams& p);
// Simulator chain with per-mode depolarizing delta on every system and ancilla mode.
QuadraticModel noisy_simulator_chain(int n, const ChainParams& p, double omega, double delta);

double target_steady_density(int n, const ChainParams& p);
double simulator_steady_density(int n, const ChainParams& p, double omega, double delta = 0.0);
double steady_density_error(int n, const ChainParams& p, double omega, double delta = 0.0);

// Occupation pattern x -> (x + 1) % 2, i.e. even sites filled.
std::vector<int> alternating_occupation(int n);

// |density_sim(t / omega^2) - density_target(t)|, ancillae start in vacuum.
double transient_density_error(int n, const ChainParams& p, double omega, double t, const std::vector<int>& occupation);

// Ordinary least squares y = a + b x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  double r2 = 0.0;
  int points = 0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct NoisyOptimum {
  double delta = 0.0;
  double omega_opt = 0.0;
  double error_min = 0.0;
  bool interior = false;  // grid minimum is not at either end of the omega grid
  std::vector<double> omega_grid;
  std::vector<double> error_grid;
};

// Scans the omega grid, then refines the minimum with Brent's method on log omega between the
// neighbours of the best grid point when refine is set.
NoisyOptimum noisy_optimum(int n, const ChainParams& p, double delta, const std::vector<double>& omega_grid,
                           bool refine = true);

// c(r) = mean over x in [lo, hi) with x + r < size of |cov(x, x + r)|, index r = 0..max_r.
std::vector<double> correlation_profile(const RMat& cov, int lo, int hi, int max_r);

struct DecayFit {
  // infinite when c(r) does not decrease, 0 when the whole window is below the floor
  double length = std::numeric_limits<double>::infinity();
  double r2 = 0.0;
  int points = 0;
};

// Fit log c(r) = a - r / length for r in [r_lo, r_hi], skipping r with c(r) <= rel_floor * max c.
DecayFit fit_decay(const std::vector<double>& profile, int r_lo, int r_hi, double rel_floor = 1e-12);

struct PhasePoint {
  double h = 0.0;
  double delta = 0.0;
  double density = 0.0;
  DecayFit full;  // r in [1, n/2]
  DecayFit tail;  // r in [n/8, n/2]
  bool long_range = false;  // tail length >= n/4
  bool signal = false;      // tail length >= n/10
  RMat covariance;
};

struct PhaseParams {
  int n = 160;
  double pairing_gamma = 0.5;
  double gamma_l = 0.5;
  double gamma_r = 0.5;
};

PhasePoint phase_point(const PhaseParams& p, double h, double delta);

}  // namespace aqs
