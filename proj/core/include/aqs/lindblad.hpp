#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqs/linalg.hpp"

namespace aqs {

struct HilbertSpec {
  std::vector<int> site_dims;

  int total_dim() const;
  int site_count() const { return static_cast<int>(site_dims.size()); }
  void validate() const;
};

struct LocalOperator {
  Mat matrix;
  std::vector<int> support;
};

struct LindbladGenerator {
  HilbertSpec space;
  std::vector<LocalOperator> hamiltonian_terms;
  std::vector<LocalOperator> jump_terms;

  int jump_count() const { return static_cast<int>(jump_terms.size()); }
  // Largest operator norm among jump terms; the workbench does not reject
  // ||L|| > 1, it only reports it.
  double max_jump_norm() const;
  void validate() const;
};

struct DegenerateFixedPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generator compiled to full-space sparse operators.
// L(rho) = G rho + rho G^dag + sum_a L_a rho L_a^dag with G = -iH - 1/2 sum L^dag L.
class CompiledGenerator {
 public:
  CompiledGenerator() = default;
  explicit CompiledGenerator(const LindbladGenerator& gen);
  CompiledGenerator(int dim, SpMat hamiltonian, std::vector<SpMat> jumps);

  int dim() const { return dim_; }
  const SpMat& hamiltonian() const { return h_; }
  const std::vector<SpMat>& jumps() const { return jumps_; }

  Mat apply(const Mat& rho) const;
  Mat apply_adjoint(const Mat& x) const;
  SpMat superoperator() const;
  SpMat adjoint_superoperator() const;

 private:
  void finalize();

  int dim_ = 0;
  SpMat h_;
  std::vector<SpMat> jumps_;
  std::vector<SpMat> jumps_dag_;
  SpMat g_;
  SpMat g_dag_;
};

Mat dissipator(const Mat& a, const Mat& x);
Mat dissipator(const LocalOperator& a, const HilbertSpec& space, const Mat& x);

SpMat vectorize(const LindbladGenerator& gen);
SpMat adjoint_generator(const LindbladGenerator& gen);

struct PropagationOptions {
  double tol = 1e-10;
  // Dense matrix exponential is used when dim^2 is at most this size.
  int dense_superop_max = 1024;
  long max_steps = 5'000'000;
};

struct EvolutionDiagnostics {
  std::string method;
  long steps = 0;
  double trace_drift = 0.0;
  double min_eigenvalue = 0.0;
};

Mat evolve(const CompiledGenerator& gen, const Mat& rho0, double t, const PropagationOptions& opt = {},
           EvolutionDiagnostics* diag = nullptr);
Mat evolve(const LindbladGenerator& gen, const Mat& rho0, double t, double tol = 1e-10);

// States at each requested time (sorted ascending, all >= 0).
std::vector<Mat> evolve_times(const CompiledGenerator& gen, const Mat& rho0, const std::vector<double>& times,
                              const PropagationOptions& opt = {});

Mat heisenberg_evolve(const CompiledGenerator& gen, const Mat& obs, double t, const PropagationOptions& opt = {});
Mat heisenberg_evolve(const LindbladGenerator& gen, const LocalOperator& obs, double t, double tol = 1e-10);

// exp(S dt) of the vectorized generator, for repeated fixed-step propagation.
class DensePropagator {
 public:
  DensePropagator(const CompiledGenerator& gen, double dt);
  Mat step(const Mat& rho) const;
  const Mat& matrix() const { return prop_; }

 private:
  int dim_;
  Mat prop_;
};

enum class FixedPointMethod { Auto, DenseEigen, SparseLU, Evolution };

struct FixedPointOptions {
  double gap_tol = 1e-9;
  FixedPointMethod method = FixedPointMethod::Auto;
  int dense_superop_max = 1024;
  double residual_tol = 1e-9;  // evolution path stopping rule on ||L(rho)||_1
  double time_cap = 1e4;       // evolution path hard cap
};

struct FixedPointResult {
  Mat state;
  double spectral_gap = std::numeric_limits<double>::quiet_NaN();
  bool gap_exact = false;
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  std::string method;
};

FixedPointResult fixed_point(const CompiledGenerator& gen, const FixedPointOptions& opt = {});
FixedPointResult fixed_point(const LindbladGenerator& gen, double gap_tol = 1e-9);

Mat maximally_mixed(int dim);

}  // namespace aqs
