#include "aqs/analogue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aqs {

namespace {

Mat sigma_minus() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

}  // namespace

SimulatorGenerator encode(const LindbladGenerator& target, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("encode: omega must be > 0");
  target.validate();
  const int m = target.jump_count();
  if (m == 0) throw std::invalid_argument("encode: target has no jump terms (M = 0, nothing to encode)");

  SimulatorGenerator sim;
  sim.target = target;
  sim.omega = omega;
  sim.ancilla_count = m;
  sim.combined.space.site_dims = target.space.site_dims;
  for (int a = 0; a < m; ++a) sim.combined.space.site_dims.push_back(2);

  for (const auto& h : target.hamiltonian_terms) sim.combined.hamiltonian_terms.push_back({omega * omega * h.matrix, h.support});

  const Mat s = sigma_minus();
  const Mat sd = s.adjoint();
  for (int a = 0; a < m; ++a) {
    const auto& l = target.jump_terms[a];
    // V = L sigma^dag + L^dag sigma, ancilla placed last in the local support
    Mat v = kron(l.matrix, sd) + kron(l.matrix.adjoint(), s);
    std::vector<int> sup = l.support;
    sup.push_back(sim.ancilla_site(a));
    sim.combined.hamiltonian_terms.push_back({omega * v, sup});
  }
  const double amp = std::sqrt(sim.damping_rate);
  for (int a = 0; a < m; ++a) sim.combined.jump_terms.push_back({amp * s, {sim.ancilla_site(a)}});
  return sim;
}

Mat initial_combined_state(const SimulatorGenerator& sim, const Mat& rho_sys0) {
  if (rho_sys0.rows() != sim.system_dim()) throw DimensionMismatch("initial_combined_state: system dimension");
  Mat vac = Mat::Zero(sim.ancilla_dim(), sim.ancilla_dim());
  vac(0, 0) = 1.0;
  return kron(rho_sys0, vac);
}

Mat reduce_to_system(const SimulatorGenerator& sim, const Mat& rho) {
  return partial_trace_tail(rho, sim.system_dim(), sim.ancilla_dim());
}

Mat run_simulator(const SimulatorGenerator& sim, const Mat& rho_sys0, double t_target, double tol) {
  if (t_target < 0) throw std::invalid_argument("run_simulator: t_target must be >= 0");
  if (t_target == 0.0) return rho_sys0;
  PropagationOptions opt;
  opt.tol = tol;
  CompiledGenerator cg(sim.combined);
  Mat rho = evolve(cg, initial_combined_state(sim, rho_sys0), t_target / (sim.omega * sim.omega), opt);
  return reduce_to_system(sim, rho);
}

Trajectory simulate_trajectory(const SimulatorGenerator& sim, const Mat& rho_sys0, double t_sim_end, double dt) {
  if (!(dt > 0) || t_sim_end < 0) throw std::invalid_argument("simulate_trajectory: bad grid");
  Trajectory traj;
  const long k = static_cast<long>(std::ceil(t_sim_end / dt - 1e-12));
  for (long i = 0; i <= k; ++i) traj.times.push_back(std::min(i * dt, t_sim_end));
  CompiledGenerator cg(sim.combined);
  Mat rho = initial_combined_state(sim, rho_sys0);
  const PropagationOptions opt;
  if (static_cast<long>(cg.dim()) * cg.dim() <= opt.dense_superop_max) {
    DensePropagator prop(cg, dt);
    traj.states.push_back(rho);
    for (long i = 1; i <= k; ++i) {
      const double h = traj.times[i] - traj.times[i - 1];
      if (std::abs(h - dt) <= 1e-9 * dt)
        rho = prop.step(rho);
      else
        rho = evolve(cg, rho, h, opt);
      traj.states.push_back(rho);
    }
  } else {
    traj.states = evolve_times(cg, rho, traj.times, opt);
  }
  return traj;
}

SpMat ancilla_lowering(const SimulatorGenerator& sim, int alpha) {
  return embed(sigma_minus(), {sim.ancilla_site(alpha)}, sim.combined.space.site_dims);
}

ExcitationTable ancilla_excitation_norms(const SimulatorGenerator& sim, const Trajectory& traj) {
  const int m = sim.ancilla_count;
  std::vector<SpMat> s(m), sd(m);
  for (int a = 0; a < m; ++a) {
    s[a] = ancilla_lowering(sim, a);
    sd[a] = s[a].adjoint();
  }
  const double w = sim.omega;
  const double zd = sim.noisy() ? sim.z_prime * sim.delta : 0.0;
  const double b1 = w / 2 + zd;
  const double b2 = w * w / 4 + w * zd / 2 + zd;

  ExcitationTable table;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const Mat& rho = traj.states[k];
    std::vector<Mat> srho(m);
    for (int a = 0; a < m; ++a) srho[a] = s[a] * rho;
    for (int a = 0; a < m; ++a) {
      ExcitationRow r{static_cast<int>(k), traj.times[k], "sigma", a, -1,
                      trace_norm(reduce_to_system(sim, srho[a])), b1};
      table.rows.push_back(r);
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        Mat dag = sd[a] * srho[b];
        table.rows.push_back({static_cast<int>(k), traj.times[k], "sigma_dag_sigma", a, b,
                              trace_norm(reduce_to_system(sim, dag)), b2});
        Mat two = s[a] * srho[b];
        table.rows.push_back({static_cast<int>(k), traj.times[k], "sigma_sigma", a, b,
                              trace_norm(reduce_to_system(sim, two)), b2});
      }
  }
  for (const auto& r : table.rows) table.max_ratio = std::max(table.max_ratio, r.ratio());
  return table;
}

}  // namespace aqs
