#include "aqs/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

namespace aqs {

void QuadraticModel::validate() const {
  const int n2 = majorana_count();
  if (h.rows() != n2 || h.cols() != n2) throw DimensionMismatch("QuadraticModel: h must be 2n x 2n");
  if ((h + h.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("QuadraticModel: h not antisymmetric");
  if (linear_jumps.size() > 0 && linear_jumps.rows() != n2) throw DimensionMismatch("QuadraticModel: linear jump rows");
  for (const auto& q : hermitian_jumps) {
    if (q.m.rows() != n2 || q.m.cols() != n2) throw DimensionMismatch("QuadraticModel: quadratic jump size");
    if ((q.m + q.m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("QuadraticModel: quadratic jump not antisymmetric");
    if (q.rate < 0) throw std::invalid_argument("QuadraticModel: negative rate");
  }
}

QuadraticModel empty_model(int modes) {
  if (modes < 1) throw std::invalid_argument("empty_model: need at least one mode");
  QuadraticModel m;
  m.modes = modes;
  m.h = RMat::Zero(2 * modes, 2 * modes);
  m.linear_jumps = Mat::Zero(2 * modes, 0);
  return m;
}

Vec annihilation_coeffs(int modes, int x) {
  if (x < 0 || x >= modes) throw std::out_of_range("annihilation_coeffs: mode");
  Vec v = Vec::Zero(2 * modes);
  v(2 * x) = 0.5;
  v(2 * x + 1) = cplx(0, 0.5);
  return v;
}

Vec creation_coeffs(int modes, int x) { return annihilation_coeffs(modes, x).conjugate(); }

QuadraticHamiltonian::QuadraticHamiltonian(int modes) : modes_(modes), w_(Mat::Zero(2 * modes, 2 * modes)) {}

void QuadraticHamiltonian::add(cplx coef, const Vec& u, const Vec& v) { w_ += coef * u * v.transpose(); }

void QuadraticHamiltonian::add_with_hc(cplx coef, const Vec& u, const Vec& v) {
  add(coef, u, v);
  // ((u.c)(v.c))^dag = (v*.c)(u*.c)
  add(std::conj(coef), v.conjugate(), u.conjugate());
}

RMat QuadraticHamiltonian::majorana() const {
  // sum W_jk c_j c_k = (i/4) sum h_jk c_j c_k + const with h = -2i (W - W^T)
  Mat h = cplx(0, -2) * (w_ - w_.transpose());
  if (h.imag().cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("QuadraticHamiltonian: not Hermitian");
  return h.real();
}

void add_linear_jump(QuadraticModel& model, const Vec& l) {
  if (l.size() != model.majorana_count()) throw DimensionMismatch("add_linear_jump: size");
  Mat next(model.majorana_count(), model.linear_jump_count() + 1);
  next << model.linear_jumps, l;
  model.linear_jumps = next;
}

QuadraticModel build_target_chain(int n, double k, double j, double lambda0, double lambda1, bool periodic) {
  if (n < 2) throw std::invalid_argument("build_target_chain: n >= 2");
  QuadraticModel m = empty_model(n);
  QuadraticHamiltonian h(n);
  const int bonds = periodic ? n : n - 1;
  for (int x = 0; x < bonds; ++x) {
    const int y = (x + 1) % n;
    h.add_with_hc(k, creation_coeffs(n, x), annihilation_coeffs(n, y));
    h.add_with_hc(j, annihilation_coeffs(n, x), annihilation_coeffs(n, y));
  }
  m.h = h.majorana();
  for (int x = 0; x < n; ++x) {
    Vec l = lambda0 * annihilation_coeffs(n, x);
    if (periodic || x + 1 < n) l += lambda1 * annihilation_coeffs(n, (x + 1) % n);
    add_linear_jump(m, l);
  }
  return m;
}

namespace {

// Embed a model's Majorana objects into a larger register (first rows/cols).
RMat embed_block(const RMat& a, int size) {
  RMat out = RMat::Zero(size, size);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

}  // namespace

QuadraticModel build_simulator_chain(const QuadraticModel& target, double omega) {
  target.validate();
  if (!(omega > 0)) throw std::invalid_argument("build_simulator_chain: omega > 0");
  if (!target.hermitian_jumps.empty())
    throw std::invalid_argument("build_simulator_chain: target must have linear jumps only");
  const int n = target.modes;
  const int m = target.linear_jump_count();
  if (m == 0) throw std::invalid_argument("build_simulator_chain: target has no jumps");
  const int total = n + m;
  QuadraticModel sim = empty_model(total);
  QuadraticHamiltonian v(total);
  for (int a = 0; a < m; ++a) {
    Vec l = Vec::Zero(2 * total);
    l.head(2 * n) = target.linear_jumps.col(a);
    // b^dag L + h.c.
    v.add_with_hc(omega, creation_coeffs(total, n + a), l);
  }
  sim.h = omega * omega * embed_block(target.h, 2 * total) + v.majorana();
  for (int a = 0; a < m; ++a) add_linear_jump(sim, 2.0 * annihilation_coeffs(total, n + a));
  return sim;
}

QuadraticModel add_depolarizing(const QuadraticModel& model, double delta, const std::vector<int>& sites) {
  if (delta < 0) throw std::invalid_argument("add_depolarizing: delta >= 0");
  QuadraticModel out = model;
  if (delta == 0) return out;
  const int n2 = model.majorana_count();
  const double amp = std::sqrt(delta / 4);
  for (int x : sites) {
    if (x < 0 || x >= model.modes) throw std::out_of_range("add_depolarizing: site");
    Vec c0 = Vec::Zero(n2), c1 = Vec::Zero(n2);
    c0(2 * x) = amp;
    c1(2 * x + 1) = amp;
    add_linear_jump(out, c0);
    add_linear_jump(out, c1);
    HermitianQuadraticJump q{RMat::Zero(n2, n2), delta / 4};
    q.m(2 * x, 2 * x + 1) = 2.0;
    q.m(2 * x + 1, 2 * x) = -2.0;
    out.hermitian_jumps.push_back(q);
  }
  return out;
}

QuadraticModel add_depolarizing(const QuadraticModel& model, double delta) {
  std::vector<int> all(model.modes);
  for (int x = 0; x < model.modes; ++x) all[x] = x;
  return add_depolarizing(model, delta, all);
}

QuadraticModel add_gain_loss(const QuadraticModel& model, double delta) {
  if (delta < 0) throw std::invalid_argument("add_gain_loss: delta >= 0");
  QuadraticModel out = model;
  if (delta == 0) return out;
  for (int x = 0; x < model.modes; ++x) {
    add_linear_jump(out, std::sqrt(delta) * annihilation_coeffs(model.modes, x));
    add_linear_jump(out, std::sqrt(delta) * creation_coeffs(model.modes, x));
  }
  return out;
}

QuadraticModel build_boundary_chain(int n, double h, double pairing_gamma, double gamma_l, double gamma_r,
                                    double delta, double u) {
  if (u != 0.0)
    throw std::invalid_argument("build_boundary_chain: U != 0 is interacting and not Gaussian; only U = 0 is supported");
  if (n < 2) throw std::invalid_argument("build_boundary_chain: n >= 2");
  if (gamma_l < 0 || gamma_r < 0) throw std::invalid_argument("build_boundary_chain: rates >= 0");
  QuadraticModel m = empty_model(n);
  QuadraticHamiltonian hb(n);
  for (int x = 0; x < n; ++x) hb.add(2 * h, creation_coeffs(n, x), annihilation_coeffs(n, x));
  for (int x = 0; x + 1 < n; ++x) {
    hb.add_with_hc(1.0, annihilation_coeffs(n, x), creation_coeffs(n, x + 1));
    hb.add_with_hc(pairing_gamma, annihilation_coeffs(n, x), annihilation_coeffs(n, x + 1));
  }
  m.h = hb.majorana();
  add_linear_jump(m, std::sqrt(gamma_l) * annihilation_coeffs(n, 0));
  add_linear_jump(m, std::sqrt(gamma_r) * annihilation_coeffs(n, n - 1));
  return add_gain_loss(m, delta);
}

namespace {

Mat bath_matrix(const QuadraticModel& model) {
  const int n2 = model.majorana_count();
  Mat b = Mat::Zero(n2, n2);
  for (int a = 0; a < model.linear_jump_count(); ++a) {
    const Vec l = model.linear_jumps.col(a);
    b += l.conjugate() * l.transpose();
  }
  return b;
}

}  // namespace

RMat drift_matrix(const QuadraticModel& model) {
  RMat x = model.h - 2.0 * bath_matrix(model).real();
  for (const auto& q : model.hermitian_jumps) x += 0.5 * q.rate * q.m * q.m;
  return x;
}

RMat affine_term(const QuadraticModel& model) { return -4.0 * bath_matrix(model).imag(); }

RMat covariance_eom(const QuadraticModel& model, const RMat& gamma) {
  const RMat x = drift_matrix(model);
  RMat d = x * gamma + gamma * x.transpose() + affine_term(model);
  for (const auto& q : model.hermitian_jumps) d -= q.rate * q.m * gamma * q.m;
  return d;
}

namespace {

struct SchurSylvester {
  Mat u, t;
  explicit SchurSylvester(const RMat& a) {
    Eigen::ComplexSchur<Mat> cs(a.cast<cplx>());
    u = cs.matrixU();
    t = cs.matrixT();
  }
  // A Y + Y A^T = C  ->  T Z + Z T^T = U^* C conj(U), Y = U Z U^T
  RMat solve(const RMat& c) const {
    const int n = static_cast<int>(t.rows());
    Mat rhs = u.adjoint() * c.cast<cplx>() * u.conjugate();
    Mat z = Mat::Zero(n, n);
    for (int j = n - 1; j >= 0; --j) {
      Vec col = rhs.col(j);
      if (j + 1 < n) col.noalias() -= z.rightCols(n - j - 1) * t.row(j).tail(n - j - 1).transpose();
      Mat shifted = t;
      shifted.diagonal().array() += t(j, j);
      z.col(j) = shifted.triangularView<Eigen::Upper>().solve(col);
    }
    Mat y = u * z * u.transpose();
    return y.real();
  }
};

}  // namespace

RMat solve_sylvester_transpose(const RMat& a, const RMat& c) { return SchurSylvester(a).solve(c); }

RMat steady_state_covariance(const QuadraticModel& model, const SteadyStateOptions& opt) {
  model.validate();
  const RMat x = drift_matrix(model);
  Eigen::EigenSolver<RMat> es(x, false);
  const double max_re = es.eigenvalues().real().maxCoeff();
  if (max_re >= -1e-12)
    throw NonContractive("steady_state_covariance: drift has an eigenvalue with Re = " + std::to_string(max_re));
  SchurSylvester sy(x);
  const RMat c0 = -affine_term(model);
  RMat g = sy.solve(c0);
  if (!model.hermitian_jumps.empty()) {
    // X G + G X^T = -A + P(G), P(G) = sum r m G m. P reads and writes only the pairs (j < k) inside
    // each jump's support, so G = G0 + sum_p (P(G))_p S(F_p) closes on those pair coordinates u.
    const int n2 = model.majorana_count();
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> pair_index(n2 * n2, -1);
    for (const auto& q : model.hermitian_jumps) {
      std::vector<int> support;
      for (int j = 0; j < n2; ++j)
        if (q.m.row(j).cwiseAbs().maxCoeff() > 0 || q.m.col(j).cwiseAbs().maxCoeff() > 0) support.push_back(j);
      for (size_t a = 0; a < support.size(); ++a)
        for (size_t b = a + 1; b < support.size(); ++b) {
          const int j = support[a], k = support[b];
          if (pair_index[j * n2 + k] < 0) {
            pair_index[j * n2 + k] = static_cast<int>(pairs.size());
            pairs.emplace_back(j, k);
          }
        }
    }
    const int np = static_cast<int>(pairs.size());
    auto basis = [&](int p) {
      RMat f = RMat::Zero(n2, n2);
      f(pairs[p].first, pairs[p].second) = 1.0;
      f(pairs[p].second, pairs[p].first) = -1.0;
      return f;
    };
    auto restrict = [&](const RMat& a) {
      Eigen::VectorXd u(np);
      for (int p = 0; p < np; ++p) u(p) = a(pairs[p].first, pairs[p].second);
      return u;
    };
    auto channel = [&](const RMat& a) {
      RMat out = RMat::Zero(n2, n2);
      for (const auto& q : model.hermitian_jumps) out += q.rate * q.m * a * q.m;
      return out;
    };
    if (np <= opt.max_pairs) {
      RMat pm(np, np), r(np, np);
      std::vector<RMat> responses;
      responses.reserve(np);
      for (int p = 0; p < np; ++p) {
        const RMat f = basis(p);
        pm.col(p) = restrict(channel(f));
        responses.push_back(sy.solve(f));
        r.col(p) = restrict(responses.back());
      }
      const RMat sys = RMat::Identity(np, np) - r * pm;
      Eigen::FullPivLU<RMat> lu(sys);
      if (lu.rank() < np) throw NonContractive("steady_state_covariance: singular quadratic-jump system");
      const Eigen::VectorXd u = lu.solve(restrict(g));
      const Eigen::VectorXd beta = pm * u;
      for (int p = 0; p < np; ++p) g += beta(p) * responses[p];
    } else {
      int it = 0;
      for (; it < opt.max_iterations; ++it) {
        RMat next = sy.solve(c0 + channel(g));
        const double diff = (next - g).cwiseAbs().maxCoeff();
        g = next;
        if (diff < opt.tol) break;
      }
      if (it == opt.max_iterations) throw NonContractive("steady_state_covariance: quadratic-jump iteration did not converge");
    }
  }
  g = (0.5 * (g - g.transpose())).eval();
  return g;
}

RMat evolve_covariance(const QuadraticModel& model, const RMat& gamma0, double t, double tol) {
  model.validate();
  if (t < 0) throw std::invalid_argument("evolve_covariance: t >= 0");
  if (t == 0) return gamma0;
  const int n2 = model.majorana_count();
  const RMat x = drift_matrix(model);
  const RMat aff = affine_term(model);
  if (model.hermitian_jumps.empty()) {
    Eigen::EigenSolver<RMat> es(x, false);
    if (es.eigenvalues().real().maxCoeff() < -1e-12) {
      const RMat ginf = steady_state_covariance(model);
      const RMat phi = (x * t).exp();
      RMat g = ginf + phi * (gamma0 - ginf) * phi.transpose();
      return 0.5 * (g - g.transpose());
    }
    // Gamma(t) = e^{Xt} Gamma0 e^{X^T t} + int_0^t e^{Xs} A e^{X^T s} ds, the integral from the
    // block exponential of [[X, A], [0, -X^T]] (Van Loan).
    RMat big = RMat::Zero(2 * n2, 2 * n2);
    big.topLeftCorner(n2, n2) = x;
    big.topRightCorner(n2, n2) = aff;
    big.bottomRightCorner(n2, n2) = -x.transpose();
    RMat e = (big * t).exp();
    const RMat phi = e.topLeftCorner(n2, n2);
    const RMat integral = e.topRightCorner(n2, n2) * phi.transpose();
    RMat g = phi * gamma0 * phi.transpose() + integral;
    return 0.5 * (g - g.transpose());
  }
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  State s(gamma0.data(), gamma0.data() + gamma0.size());
  auto rhs = [&](const State& in, State& out, double) {
    Eigen::Map<const RMat> g(in.data(), n2, n2);
    RMat d = covariance_eom(model, RMat(g));
    std::copy(d.data(), d.data() + d.size(), out.begin());
  };
  odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol), rhs, s, 0.0, t,
                             std::min(0.01, t));
  RMat g = Eigen::Map<RMat>(s.data(), n2, n2);
  return 0.5 * (g - g.transpose());
}

RMat vacuum_covariance(int modes) { return fock_covariance(std::vector<int>(modes, 0)); }

RMat fock_covariance(const std::vector<int>& occupation) {
  const int n = static_cast<int>(occupation.size());
  RMat g = RMat::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x) {
    const double v = occupation[x] ? 1.0 : -1.0;
    g(2 * x, 2 * x + 1) = v;
    g(2 * x + 1, 2 * x) = -v;
  }
  return g;
}

FermionObservables observables(const RMat& gamma, int count) {
  const int n = static_cast<int>(gamma.rows()) / 2;
  if (count < 0) count = n;
  if (count > n) throw std::out_of_range("observables: count exceeds mode count");
  FermionObservables o;
  o.occupation.resize(count);
  o.covariance = RMat::Zero(count, count);
  for (int x = 0; x < count; ++x) o.occupation[x] = 0.5 * (1.0 + gamma(2 * x, 2 * x + 1));
  double sum = 0.0;
  for (double v : o.occupation) sum += v;
  o.density = count > 0 ? sum / count : 0.0;
  // Wick: cov(n_x, n_y) = (Gamma_{ab'} Gamma_{a'b} - Gamma_{ab} Gamma_{a'b'}) / 4, a = 2x, b = 2y
  for (int x = 0; x < count; ++x)
    for (int y = 0; y < count; ++y) {
      if (x == y) {
        o.covariance(x, x) = o.occupation[x] * (1.0 - o.occupation[x]);
        continue;
      }
      const int a = 2 * x, ap = a + 1, b = 2 * y, bp = b + 1;
      o.covariance(x, y) = 0.25 * (gamma(a, bp) * gamma(ap, b) - gamma(a, b) * gamma(ap, bp));
    }
  return o;
}

bool is_physical_covariance(const RMat& gamma, double tol) {
  if ((gamma + gamma.transpose()).cwiseAbs().maxCoeff() > 1e-9) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(cplx(0, 1) * gamma.cast<cplx>(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff() <= 1.0 + tol;
}

}  // namespace aqs
