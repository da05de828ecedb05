#pragma once

#include <stdexcept>
#include <vector>

#include "aqs/linalg.hpp"

namespace aqs {

// Majorana operators, 0-based: c_{2x} = a_x + a_x^dag, c_{2x+1} = -i(a_x - a_x^dag).
// Covariance Gamma_jk = (i/2) <[c_j, c_k]>, so n_x = (1 + Gamma_{2x,2x+1}) / 2.

struct NonContractive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HermitianQuadraticJump {
  RMat m;  // real antisymmetric; jump operator (i/4) sum_jk m_jk c_j c_k
  double rate = 0.0;
};

struct QuadraticModel {
  int modes = 0;
  RMat h;                 // H = (i/4) sum_jk h_jk c_j c_k
  Mat linear_jumps;       // 2n x m, column a holds l_a with L_a = sum_j l_aj c_j
  std::vector<HermitianQuadraticJump> hermitian_jumps;

  int majorana_count() const { return 2 * modes; }
  int linear_jump_count() const { return static_cast<int>(linear_jumps.cols()); }
  void validate() const;
};

QuadraticModel empty_model(int modes);

// Majorana coefficient vectors of a_x and a_x^dag.
Vec annihilation_coeffs(int modes, int x);
Vec creation_coeffs(int modes, int x);

// Accumulates a Hermitian quadratic Hamiltonian written as products of two
// linear Majorana combinations; constants are dropped.
class QuadraticHamiltonian {
 public:
  explicit QuadraticHamiltonian(int modes);
  // coef * (u.c)(v.c)
  void add(cplx coef, const Vec& u, const Vec& v);
  // coef * (u.c)(v.c) + h.c.
  void add_with_hc(cplx coef, const Vec& u, const Vec& v);
  RMat majorana() const;  // throws if the accumulated operator is not Hermitian

 private:
  int modes_;
  Mat w_;
};

void add_linear_jump(QuadraticModel& model, const Vec& l);

// H = sum_x K (a_x^dag a_{x+1} + h.c.) + J (a_x a_{x+1} + h.c.), L_x = l0 a_x + l1 a_{x+1}.
// Open chains drop the bond (n-1, 0) and the jump on the last site uses only l0.
QuadraticModel build_target_chain(int n, double k, double j, double lambda0, double lambda1, bool periodic = true);

// 2n modes (system then ancilla, one ancilla per linear jump); needs no Hermitian jumps.
QuadraticModel build_simulator_chain(const QuadraticModel& target, double omega);

// Per-site depolarizing delta (Tr_x(.) I/2 - id): rate delta/4 on c_{2x}, c_{2x+1}, i c_{2x} c_{2x+1}.
QuadraticModel add_depolarizing(const QuadraticModel& model, double delta, const std::vector<int>& sites);
QuadraticModel add_depolarizing(const QuadraticModel& model, double delta);

// Gain/loss noise sqrt(delta) a_x, sqrt(delta) a_x^dag on every mode.
QuadraticModel add_gain_loss(const QuadraticModel& model, double delta);

// H = 2h sum n_x + sum_{x<n} (a_x a_{x+1}^dag + g a_x a_{x+1} + h.c.), jumps sqrt(GL) a_1, sqrt(GR) a_n,
// then gain/loss noise at rate delta. u != 0 is rejected.
QuadraticModel build_boundary_chain(int n, double h, double pairing_gamma, double gamma_l, double gamma_r,
                                    double delta = 0.0, double u = 0.0);

// dGamma/dt = X Gamma + Gamma X^T - 4 B_I - sum r m Gamma m,
// X = h - 2 B_R + sum (r/2) m^2, B = sum_a conj(l_a) l_a^T.
RMat drift_matrix(const QuadraticModel& model);
RMat affine_term(const QuadraticModel& model);  // -4 B_I
RMat covariance_eom(const QuadraticModel& model, const RMat& gamma);

struct SteadyStateOptions {
  double tol = 1e-13;
  int max_iterations = 2000;
  int max_pairs = 4000;  // above this, fall back to fixed-point iteration
};

RMat steady_state_covariance(const QuadraticModel& model, const SteadyStateOptions& opt = {});
RMat evolve_covariance(const QuadraticModel& model, const RMat& gamma0, double t, double tol = 1e-12);

// Solves A Y + Y A^T = C with a complex Schur form of A.
RMat solve_sylvester_transpose(const RMat& a, const RMat& c);

RMat vacuum_covariance(int modes);
// Product of Fock states, occupation[x] in {0, 1}.
RMat fock_covariance(const std::vector<int>& occupation);

struct FermionObservables {
  std::vector<double> occupation;
  double density = 0.0;  // mean occupation over the selected modes
  RMat covariance;       // cov(n_x, n_y)
};

// Modes 0..count-1 (count < 0: all modes).
FermionObservables observables(const RMat& gamma, int count = -1);

bool is_physical_covariance(const RMat& gamma, double tol = 1e-7);

}  // namespace aqs
