#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "aqs/lindblad.hpp"

namespace aqs {

// One local noise Lindbladian N_beta = -i[v, .] + sum_l D_l on the combined
// (system + ancilla) space, already scaled so that its diamond norm is <= 1.
struct NoiseTerm {
  std::string kind;
  std::vector<int> support;
  std::vector<LocalOperator> hamiltonian;
  std::vector<LocalOperator> jumps;
  double scale = 1.0;          // factor applied to the raw generator
  double diamond_bound = 1.0;  // upper bound on the scaled diamond norm
  bool analytic = true;        // false: bound is 2*||generator matrix||
};

struct NoiseModel {
  double delta = 0.0;
  std::vector<NoiseTerm> terms;
  int z_prime = 0;
};

struct SimulatorGenerator {
  LindbladGenerator target;
  double omega = 0.0;
  int ancilla_count = 0;
  double damping_rate = 4.0;
  LindbladGenerator combined;  // system sites first, then one qubit per jump
  double delta = 0.0;
  std::vector<NoiseTerm> noise;
  int z_prime = 0;

  int system_dim() const { return target.space.total_dim(); }
  int ancilla_dim() const { return 1 << ancilla_count; }
  int ancilla_site(int alpha) const { return target.space.site_count() + alpha; }
  bool noisy() const { return !noise.empty(); }
};

SimulatorGenerator encode(const LindbladGenerator& target, double omega);

// Catalog. Sites index the combined space.
NoiseTerm dephasing_noise(int site);
NoiseTerm amplitude_damping_noise(int site);
NoiseTerm depolarizing_noise(int site);
NoiseTerm coherent_noise(const Mat& v, const std::vector<int>& support);
// User-supplied local generator; bound 2*||vectorized generator||_2, logged.
NoiseTerm user_noise(const std::vector<LocalOperator>& hamiltonian, const std::vector<LocalOperator>& jumps,
                     const std::vector<int>& support, const std::vector<int>& combined_dims);

// ||(N (x) id)(Phi)||_1 on the maximally entangled input: a lower bound on
// the diamond norm, used to sanity check the analytic scalings.
double diamond_norm_lower_estimate(const NoiseTerm& term, const std::vector<int>& combined_dims);

int compute_z_prime(const SimulatorGenerator& sim, const std::vector<NoiseTerm>& terms);
NoiseModel make_noise_model(const SimulatorGenerator& sim, double delta, std::vector<NoiseTerm> terms);

SimulatorGenerator add_noise(const SimulatorGenerator& sim, const NoiseModel& noise);

// rho_sys0 (x) |0..0><0..0|
Mat initial_combined_state(const SimulatorGenerator& sim, const Mat& rho_sys0);
Mat reduce_to_system(const SimulatorGenerator& sim, const Mat& rho);

Mat run_simulator(const SimulatorGenerator& sim, const Mat& rho_sys0, double t_target, double tol = 1e-10);

struct Trajectory {
  std::vector<double> times;  // simulator time
  std::vector<Mat> states;    // combined states
};

// Uniform grid on [0, t_sim_end] with spacing dt (last point clipped).
Trajectory simulate_trajectory(const SimulatorGenerator& sim, const Mat& rho_sys0, double t_sim_end, double dt);

struct ExcitationRow {
  int time_index = 0;
  double t = 0.0;
  std::string kind;  // "sigma", "sigma_dag_sigma", "sigma_sigma"
  int alpha = 0;
  int alpha2 = -1;
  double norm = 0.0;
  double bound = 0.0;
  double ratio() const { return bound > 0 ? norm / bound : (norm > 0 ? INFINITY : 0.0); }
};

struct ExcitationTable {
  std::vector<ExcitationRow> rows;
  double max_ratio = 0.0;
  bool within_bounds(double slack = 1e-6) const { return max_ratio <= 1.0 + slack; }
};

ExcitationTable ancilla_excitation_norms(const SimulatorGenerator& sim, const Trajectory& traj);

// Ancilla lowering operator sigma_alpha and number operator on the combined space.
SpMat ancilla_lowering(const SimulatorGenerator& sim, int alpha);

}  // namespace aqs
