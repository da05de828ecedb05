#include "aqs/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <spdlog/spdlog.h>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/numeric/odeint.hpp>

namespace aqs {

int HilbertSpec::total_dim() const {
  long d = 1;
  for (int s : site_dims) d *= s;
  return static_cast<int>(d);
}

void HilbertSpec::validate() const {
  for (int s : site_dims)
    if (s < 2) throw std::invalid_argument("HilbertSpec: every site dimension must be >= 2");
}

double LindbladGenerator::max_jump_norm() const {
  double m = 0.0;
  for (const auto& l : jump_terms) m = std::max(m, op_norm(l.matrix));
  return m;
}

void LindbladGenerator::validate() const {
  space.validate();
  auto check_support = [&](const LocalOperator& op) {
    int sub = 1;
    for (int s : op.support) {
      if (s < 0 || s >= space.site_count()) throw std::invalid_argument("LocalOperator support out of range");
      sub *= space.site_dims[s];
    }
    if (op.matrix.rows() != sub || op.matrix.cols() != sub)
      throw DimensionMismatch("LocalOperator matrix does not match support dimensions");
  };
  for (const auto& h : hamiltonian_terms) {
    check_support(h);
    if (!is_hermitian(h.matrix, 1e-12)) throw std::invalid_argument("Hamiltonian term is not Hermitian");
  }
  for (const auto& l : jump_terms) check_support(l);
}

CompiledGenerator::CompiledGenerator(const LindbladGenerator& gen) {
  gen.validate();
  dim_ = gen.space.total_dim();
  h_ = SpMat(dim_, dim_);
  for (const auto& t : gen.hamiltonian_terms) h_ += embed(t.matrix, t.support, gen.space.site_dims);
  for (const auto& t : gen.jump_terms) jumps_.push_back(embed(t.matrix, t.support, gen.space.site_dims));
  finalize();
}

CompiledGenerator::CompiledGenerator(int dim, SpMat hamiltonian, std::vector<SpMat> jumps)
    : dim_(dim), h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  if (h_.rows() != dim_ || h_.cols() != dim_) throw DimensionMismatch("CompiledGenerator: Hamiltonian size");
  for (const auto& l : jumps_)
    if (l.rows() != dim_ || l.cols() != dim_) throw DimensionMismatch("CompiledGenerator: jump size");
  finalize();
}

void CompiledGenerator::finalize() {
  SpMat k(dim_, dim_);
  jumps_dag_.clear();
  for (auto& l : jumps_) {
    l.makeCompressed();
    SpMat ld = l.adjoint();
    k += ld * l;
    jumps_dag_.push_back(std::move(ld));
  }
  g_ = (-I1) * h_ - 0.5 * k;
  g_.makeCompressed();
  g_dag_ = g_.adjoint();
}

Mat CompiledGenerator::apply(const Mat& rho) const {
  Mat out = g_ * rho;
  out += (g_ * rho.adjoint()).adjoint();
  for (size_t a = 0; a < jumps_.size(); ++a) {
    Mat lr = jumps_[a] * rho;
    out += (jumps_[a] * lr.adjoint()).adjoint();
  }
  return out;
}

Mat CompiledGenerator::apply_adjoint(const Mat& x) const {
  Mat out = g_dag_ * x;
  out += (g_dag_ * x.adjoint()).adjoint();
  for (size_t a = 0; a < jumps_.size(); ++a) {
    Mat lx = jumps_dag_[a] * x;
    out += (jumps_dag_[a] * lx.adjoint()).adjoint();
  }
  return out;
}

SpMat CompiledGenerator::superoperator() const {
  SpMat id = sparse_identity(dim_);
  SpMat gc = g_.conjugate();
  SpMat s = kron(g_, id) + kron(id, gc);
  for (const auto& l : jumps_) {
    SpMat lc = l.conjugate();
    s += kron(l, lc);
  }
  s.makeCompressed();
  return s;
}

SpMat CompiledGenerator::adjoint_superoperator() const {
  SpMat id = sparse_identity(dim_);
  SpMat gt = g_.transpose();
  SpMat s = kron(g_dag_, id) + kron(id, gt);
  for (size_t a = 0; a < jumps_.size(); ++a) {
    SpMat lt = jumps_[a].transpose();
    s += kron(jumps_dag_[a], lt);
  }
  s.makeCompressed();
  return s;
}

Mat dissipator(const Mat& a, const Mat& x) {
  if (a.rows() != x.rows() || a.cols() != x.cols() || a.rows() != a.cols())
    throw DimensionMismatch("dissipator: A and X act on different spaces");
  Mat ada = a.adjoint() * a;
  return a * x * a.adjoint() - 0.5 * (ada * x + x * ada);
}

Mat dissipator(const LocalOperator& a, const HilbertSpec& space, const Mat& x) {
  Mat full = Mat(embed(a.matrix, a.support, space.site_dims));
  return dissipator(full, x);
}

SpMat vectorize(const LindbladGenerator& gen) { return CompiledGenerator(gen).superoperator(); }
SpMat adjoint_generator(const LindbladGenerator& gen) { return CompiledGenerator(gen).adjoint_superoperator(); }

Mat maximally_mixed(int dim) { return Mat::Identity(dim, dim) / static_cast<double>(dim); }

namespace {

using State = std::vector<cplx>;
using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

State to_state(const Mat& m) {
  State s(m.size());
  Eigen::Map<RowMat>(s.data(), m.rows(), m.cols()) = m;
  return s;
}

Mat from_state(const State& s, int d) { return Eigen::Map<const RowMat>(s.data(), d, d); }

bool use_dense(int dim, int dense_superop_max) {
  return static_cast<long>(dim) * dim <= dense_superop_max;
}

struct Rhs {
  const CompiledGenerator* gen;
  bool adjoint;
  void operator()(const State& x, State& dxdt, double) const {
    const int d = gen->dim();
    Eigen::Map<const RowMat> xm(x.data(), d, d);
    Mat in = xm;
    Mat out = adjoint ? gen->apply_adjoint(in) : gen->apply(in);
    dxdt.resize(x.size());
    Eigen::Map<RowMat>(dxdt.data(), d, d) = out;
  }
};

std::vector<Mat> integrate_rk(const CompiledGenerator& gen, const Mat& x0, const std::vector<double>& times,
                              const PropagationOptions& opt, bool adjoint, long* steps_out) {
  namespace odeint = boost::numeric::odeint;
  using Stepper = odeint::runge_kutta_dopri5<State>;
  const int d = gen.dim();
  State x = to_state(x0);
  std::vector<Mat> out;
  out.reserve(times.size());
  long steps = 0;
  double t_prev = 0.0;
  double dt = 1e-3;
  auto stepper = odeint::make_controlled<Stepper>(opt.tol, opt.tol);
  Rhs rhs{&gen, adjoint};
  for (double t : times) {
    if (t < t_prev) throw std::invalid_argument("evolve_times: times must be sorted and >= 0");
    double tc = t_prev;
    while (tc < t) {
      double h = std::min(dt, t - tc);
      int fails = 0;
      for (;;) {
        odeint::controlled_step_result r = stepper.try_step(rhs, x, tc, h);
        if (r == odeint::success) {
          dt = h;
          break;
        }
        if (++fails > 500 || h < 1e-14 * std::max(1.0, std::abs(tc)))
          throw IntegrationFailure("adaptive RK step-size underflow at t = " + std::to_string(tc) +
                                   " (h = " + std::to_string(h) + ")");
        // h was reduced in place by the stepper
      }
      if (++steps > opt.max_steps)
        throw IntegrationFailure("adaptive RK exceeded max_steps at t = " + std::to_string(tc));
      // try_step advances tc and proposes the next dt in h
    }
    out.push_back(from_state(x, d));
    t_prev = t;
  }
  if (steps_out) *steps_out = steps;
  return out;
}

Mat dense_exp_apply(const SpMat& s, double t, const Mat& x0) {
  const int d = static_cast<int>(x0.rows());
  Mat sd = Mat(s) * t;
  Mat e = sd.exp();
  return unvec(e * vec(x0), d);
}

}  // namespace

std::vector<Mat> evolve_times(const CompiledGenerator& gen, const Mat& rho0, const std::vector<double>& times,
                              const PropagationOptions& opt) {
  if (rho0.rows() != gen.dim() || rho0.cols() != gen.dim()) throw DimensionMismatch("evolve: rho0 size");
  for (double t : times)
    if (t < 0) throw std::invalid_argument("evolve: t must be >= 0");
  if (use_dense(gen.dim(), opt.dense_superop_max)) {
    SpMat s = gen.superoperator();
    std::vector<Mat> out;
    Mat cur = rho0;
    double t_prev = 0.0;
    for (double t : times) {
      if (t < t_prev) throw std::invalid_argument("evolve_times: times must be sorted");
      if (t > t_prev) cur = dense_exp_apply(s, t - t_prev, cur);
      out.push_back(cur);
      t_prev = t;
    }
    return out;
  }
  return integrate_rk(gen, rho0, times, opt, false, nullptr);
}

Mat evolve(const CompiledGenerator& gen, const Mat& rho0, double t, const PropagationOptions& opt,
           EvolutionDiagnostics* diag) {
  if (t < 0) throw std::invalid_argument("evolve: t must be >= 0");
  if (rho0.rows() != gen.dim() || rho0.cols() != gen.dim()) throw DimensionMismatch("evolve: rho0 size");
  Mat out;
  long steps = 0;
  std::string method;
  if (t == 0.0) {
    out = rho0;
    method = "identity";
  } else if (use_dense(gen.dim(), opt.dense_superop_max)) {
    out = dense_exp_apply(gen.superoperator(), t, rho0);
    method = "dense-expm";
  } else {
    out = integrate_rk(gen, rho0, {t}, opt, false, &steps).front();
    method = "dopri5";
  }
  if (diag) {
    diag->method = method;
    diag->steps = steps;
    diag->trace_drift = std::abs(out.trace() - rho0.trace());
    diag->min_eigenvalue = min_eigenvalue_hermitian(out);
    if (diag->min_eigenvalue < -1e-8) spdlog::warn("evolve: smallest eigenvalue {:.3e}", diag->min_eigenvalue);
  }
  return out;
}

Mat evolve(const LindbladGenerator& gen, const Mat& rho0, double t, double tol) {
  PropagationOptions opt;
  opt.tol = tol;
  return evolve(CompiledGenerator(gen), rho0, t, opt);
}

Mat heisenberg_evolve(const CompiledGenerator& gen, const Mat& obs, double t, const PropagationOptions& opt) {
  if (t < 0) throw std::invalid_argument("heisenberg_evolve: t must be >= 0");
  if (t == 0.0) return obs;
  if (use_dense(gen.dim(), opt.dense_superop_max)) return dense_exp_apply(gen.adjoint_superoperator(), t, obs);
  return integrate_rk(gen, obs, {t}, opt, true, nullptr).front();
}

Mat heisenberg_evolve(const LindbladGenerator& gen, const LocalOperator& obs, double t, double tol) {
  PropagationOptions opt;
  opt.tol = tol;
  Mat full = Mat(embed(obs.matrix, obs.support, gen.space.site_dims));
  return heisenberg_evolve(CompiledGenerator(gen), full, t, opt);
}

DensePropagator::DensePropagator(const CompiledGenerator& gen, double dt) : dim_(gen.dim()) {
  Mat s = Mat(gen.superoperator()) * dt;
  prop_ = s.exp();
}

Mat DensePropagator::step(const Mat& rho) const { return unvec(prop_ * vec(rho), dim_); }

namespace {

Mat normalize_state(const Mat& x) {
  Mat h = 0.5 * (x + x.adjoint());
  return h / h.trace().real();
}

FixedPointResult finish(const CompiledGenerator& gen, Mat state, std::string method) {
  FixedPointResult r;
  r.state = normalize_state(state);
  r.residual = trace_norm(gen.apply(r.state));
  r.min_eigenvalue = min_eigenvalue_hermitian(r.state);
  if (r.min_eigenvalue < -1e-8) spdlog::warn("fixed_point: smallest eigenvalue {:.3e}", r.min_eigenvalue);
  r.method = std::move(method);
  return r;
}

FixedPointResult fixed_point_dense(const CompiledGenerator& gen, const FixedPointOptions& opt) {
  Mat s = Mat(gen.superoperator());
  Eigen::ComplexEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success) throw std::runtime_error("fixed_point: eigensolver failed");
  const auto& ev = es.eigenvalues();
  std::vector<int> zero;
  double max_re = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= opt.gap_tol)
      zero.push_back(i);
    else
      max_re = std::max(max_re, ev(i).real());
  }
  if (zero.size() != 1)
    throw DegenerateFixedPoint("fixed_point: zero eigenspace has dimension " + std::to_string(zero.size()) +
                               " at gap_tol = " + std::to_string(opt.gap_tol));
  Mat state = unvec(es.eigenvectors().col(zero[0]), gen.dim());
  FixedPointResult r = finish(gen, state, "dense-eigen");
  r.spectral_gap = ev.size() > 1 ? -max_re : std::numeric_limits<double>::infinity();
  r.gap_exact = true;
  return r;
}

FixedPointResult fixed_point_sparse(const CompiledGenerator& gen, const FixedPointOptions& opt) {
  const int d = gen.dim();
  const long n = static_cast<long>(d) * d;
  SpMat s = gen.superoperator();
  // Replace the (0,0) row by the trace functional; that row is a linear
  // combination of the other diagonal rows because Tr is a left null vector.
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(s.nonZeros() + d);
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < d; ++i) trip.emplace_back(0, static_cast<long>(i) * d + i, 1.0);
  SpMat a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw DegenerateFixedPoint("fixed_point: bordered generator is singular (non-unique steady state)");
  Vec rhs = Vec::Zero(n);
  rhs(0) = 1.0;
  Vec x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw DegenerateFixedPoint("fixed_point: sparse solve failed (non-unique steady state)");
  FixedPointResult r = finish(gen, unvec(x, d), "sparse-lu");
  if (r.residual > 1e-6)
    throw DegenerateFixedPoint("fixed_point: sparse solution residual " + std::to_string(r.residual));
  (void)opt;
  return r;
}

// Decay rate of ||e^{Lt}(rho_mm - sigma)||_1 between the two last samples.
double estimate_gap(const CompiledGenerator& gen, const Mat& sigma) {
  // fixed pseudo-random traceless Hermitian perturbation, so that it overlaps
  // the slowest mode generically
  const int d = gen.dim();
  Mat pert(d, d);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto next = [&]() { return u(rng); };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) pert(i, j) = cplx(next(), next());
  pert = 0.5 * (pert + pert.adjoint()).eval();
  pert -= Mat::Identity(d, d) * (pert.trace() / static_cast<double>(d));
  (void)sigma;
  PropagationOptions po;
  po.tol = 1e-11;
  po.dense_superop_max = 0;
  std::vector<double> times{10.0, 20.0};
  auto traj = integrate_rk(gen, pert, times, po, false, nullptr);
  double n1 = trace_norm(traj[0]), n2 = trace_norm(traj[1]);
  if (n2 <= 0 || n1 <= 0) return std::numeric_limits<double>::infinity();
  return std::log(n1 / n2) / (times[1] - times[0]);
}

FixedPointResult fixed_point_evolution(const CompiledGenerator& gen, const FixedPointOptions& opt) {
  PropagationOptions po;
  po.tol = 1e-11;
  po.dense_superop_max = 0;
  Mat rho = maximally_mixed(gen.dim());
  double t = 0.0, chunk = 1.0;
  for (;;) {
    double res = trace_norm(gen.apply(rho));
    if (res <= opt.residual_tol) break;
    if (t >= opt.time_cap)
      throw IntegrationFailure("fixed_point: time cap " + std::to_string(opt.time_cap) +
                               " reached with residual " + std::to_string(res));
    rho = integrate_rk(gen, rho, {chunk}, po, false, nullptr).front();
    t += chunk;
    chunk = std::min(2.0 * chunk, 64.0);
  }
  return finish(gen, rho, "evolution");
}

}  // namespace

FixedPointResult fixed_point(const CompiledGenerator& gen, const FixedPointOptions& opt) {
  FixedPointMethod m = opt.method;
  if (m == FixedPointMethod::Auto)
    m = use_dense(gen.dim(), opt.dense_superop_max) ? FixedPointMethod::DenseEigen : FixedPointMethod::SparseLU;
  FixedPointResult r;
  switch (m) {
    case FixedPointMethod::DenseEigen:
      return fixed_point_dense(gen, opt);
    case FixedPointMethod::SparseLU:
      r = fixed_point_sparse(gen, opt);
      break;
    default:
      r = fixed_point_evolution(gen, opt);
      break;
  }
  r.spectral_gap = estimate_gap(gen, r.state);
  r.gap_exact = false;
  return r;
}

FixedPointResult fixed_point(const LindbladGenerator& gen, double gap_tol) {
  FixedPointOptions opt;
  opt.gap_tol = gap_tol;
  return fixed_point(CompiledGenerator(gen), opt);
}

}  // namespace aqs
