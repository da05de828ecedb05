#include "aqs/majorana_moments.hpp"

#include <bit>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace aqs {

namespace {

constexpr double kPrune = 1e-14;

// c_S c_T = (-1)^{#(s in S, t in T, s > t)} c_{S xor T}
int product_sign(MajoranaMask s, MajoranaMask t) {
  int swaps = 0;
  while (t) {
    const int j = std::countr_zero(t);
    t &= t - 1;
    swaps += std::popcount(j + 1 < 64 ? (s >> (j + 1)) : MajoranaMask{0});
  }
  return (swaps & 1) ? -1 : 1;
}

void accumulate(MajoranaPoly& out, const MajoranaPoly& in, cplx scale) {
  for (const auto& [k, v] : in) out[k] += scale * v;
}

MajoranaPoly pruned(MajoranaPoly p) {
  for (auto it = p.begin(); it != p.end();) it = std::abs(it->second) < kPrune ? p.erase(it) : std::next(it);
  return p;
}

MajoranaPoly adjoint(const MajoranaPoly& p) {
  // (c_S)^dag = c_{s_k} ... c_{s_1} = (-1)^{k(k-1)/2} c_S
  MajoranaPoly out;
  for (const auto& [k, v] : p) {
    const int deg = std::popcount(k);
    out[k] = ((deg * (deg - 1) / 2) % 2 ? -1.0 : 1.0) * std::conj(v);
  }
  return out;
}

}  // namespace

MajoranaPoly majorana_product(const MajoranaPoly& a, const MajoranaPoly& b) {
  MajoranaPoly out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) out[ka ^ kb] += static_cast<double>(product_sign(ka, kb)) * va * vb;
  return pruned(std::move(out));
}

MajoranaPoly majorana_linear(const Vec& v) {
  if (v.size() > 64) throw DimensionMismatch("majorana_linear: at most 64 Majoranas");
  MajoranaPoly out;
  for (int j = 0; j < v.size(); ++j)
    if (v(j) != 0.0) out[MajoranaMask{1} << j] += v(j);
  return out;
}

MajoranaPoly majorana_quadratic(const RMat& m) {
  if (m.rows() > 64) throw DimensionMismatch("majorana_quadratic: at most 64 Majoranas");
  MajoranaPoly out;
  for (int j = 0; j < m.rows(); ++j)
    for (int k = j + 1; k < m.cols(); ++k) {
      // m_jk c_j c_k + m_kj c_k c_j = 2 m_jk c_j c_k for antisymmetric m
      const double v = 0.5 * (m(j, k) - m(k, j));
      if (v != 0.0) out[(MajoranaMask{1} << j) | (MajoranaMask{1} << k)] += cplx(0, 0.5 * v);
    }
  return out;
}

MajoranaPoly heisenberg_generator(const QuadraticModel& model, const MajoranaPoly& x) {
  MajoranaPoly out;
  const MajoranaPoly h = majorana_quadratic(model.h);
  accumulate(out, majorana_product(h, x), cplx(0, 1));
  accumulate(out, majorana_product(x, h), cplx(0, -1));
  auto dissipate = [&](const MajoranaPoly& l, double rate) {
    const MajoranaPoly ld = adjoint(l);
    const MajoranaPoly ldl = majorana_product(ld, l);
    accumulate(out, majorana_product(majorana_product(ld, x), l), rate);
    accumulate(out, majorana_product(ldl, x), -0.5 * rate);
    accumulate(out, majorana_product(x, ldl), -0.5 * rate);
  };
  for (int a = 0; a < model.linear_jump_count(); ++a) dissipate(majorana_linear(model.linear_jumps.col(a)), 1.0);
  for (const auto& q : model.hermitian_jumps) dissipate(majorana_quadratic(q.m), q.rate);
  return pruned(std::move(out));
}

MomentHierarchy::MomentHierarchy(const QuadraticModel& model) : modes_(model.modes) {
  model.validate();
  const int n2 = model.majorana_count();
  if (n2 > 64) throw DimensionMismatch("MomentHierarchy: at most 32 modes");
  monomials_.push_back(0);
  for (int j = 0; j < n2; ++j)
    for (int k = j + 1; k < n2; ++k) monomials_.push_back((MajoranaMask{1} << j) | (MajoranaMask{1} << k));
  for (int a = 0; a < n2; ++a)
    for (int b = a + 1; b < n2; ++b)
      for (int c = b + 1; c < n2; ++c)
        for (int d = c + 1; d < n2; ++d)
          monomials_.push_back((MajoranaMask{1} << a) | (MajoranaMask{1} << b) | (MajoranaMask{1} << c) |
                               (MajoranaMask{1} << d));
  for (int i = 0; i < size(); ++i) lookup_[monomials_[i]] = i;
  generator_ = Mat::Zero(size(), size());
  for (int i = 1; i < size(); ++i) {
    const MajoranaPoly row = heisenberg_generator(model, MajoranaPoly{{monomials_[i], 1.0}});
    for (const auto& [k, v] : row) {
      if (std::popcount(k) > std::popcount(monomials_[i]) || std::popcount(k) % 2)
        throw std::logic_error("MomentHierarchy: generator raised the moment degree");
      generator_(i, index(k)) += v;
    }
  }
}

int MomentHierarchy::index(MajoranaMask mask) const {
  auto it = lookup_.find(mask);
  if (it == lookup_.end()) throw std::out_of_range("MomentHierarchy: monomial outside the hierarchy");
  return it->second;
}

Vec MomentHierarchy::gaussian_moments(const RMat& gamma) const {
  if (gamma.rows() != 2 * modes_) throw DimensionMismatch("gaussian_moments: size");
  // <c_j c_k> = -i Gamma_jk for j != k; four-point by Wick (Pfaffian of the 4x4 block)
  auto two = [&](int j, int k) { return cplx(0, -gamma(j, k)); };
  Vec m(size());
  for (int i = 0; i < size(); ++i) {
    MajoranaMask s = monomials_[i];
    int idx[4], deg = 0;
    while (s) {
      idx[deg++] = std::countr_zero(s);
      s &= s - 1;
    }
    if (deg == 0)
      m(i) = 1.0;
    else if (deg == 2)
      m(i) = two(idx[0], idx[1]);
    else
      m(i) = two(idx[0], idx[1]) * two(idx[2], idx[3]) - two(idx[0], idx[2]) * two(idx[1], idx[3]) +
             two(idx[0], idx[3]) * two(idx[1], idx[2]);
  }
  return m;
}

Vec MomentHierarchy::evolve(const Vec& m0, double t) const {
  if (t < 0) throw std::invalid_argument("MomentHierarchy::evolve: t >= 0");
  if (t == 0) return m0;
  return (generator_ * t).exp() * m0;
}

std::vector<Vec> MomentHierarchy::evolve_times(const Vec& m0, const std::vector<double>& times) const {
  std::vector<Vec> out;
  out.reserve(times.size());
  Vec m = m0;
  double now = 0.0, last_dt = -1.0;
  Mat step;
  for (double t : times) {
    if (t < now) throw std::invalid_argument("MomentHierarchy::evolve_times: times must increase");
    const double dt = t - now;
    if (dt > 0) {
      if (std::abs(dt - last_dt) > 1e-12 * dt) {
        step = (generator_ * dt).exp();
        last_dt = dt;
      }
      m = step * m;
    }
    now = t;
    out.push_back(m);
  }
  return out;
}

Vec MomentHierarchy::steady_state() const {
  const int r = size() - 1;
  const Mat a = generator_.bottomRightCorner(r, r);
  const Vec b = -generator_.bottomLeftCorner(r, 1);
  Eigen::FullPivLU<Mat> lu(a);
  if (lu.rank() < r) throw NonContractive("MomentHierarchy: steady state is not unique");
  Vec m(size());
  m(0) = 1.0;
  m.tail(r) = lu.solve(b);
  return m;
}

FermionObservables MomentHierarchy::observables(const Vec& m, int count) const {
  if (count < 0) count = modes_;
  if (count > modes_) throw std::out_of_range("MomentHierarchy::observables: count");
  auto pair = [](int x) { return (MajoranaMask{3} << (2 * x)); };
  FermionObservables o;
  o.occupation.resize(count);
  o.covariance = RMat::Zero(count, count);
  double sum = 0.0;
  for (int x = 0; x < count; ++x) {
    // n_x = (1 + i c_{2x} c_{2x+1}) / 2
    o.occupation[x] = 0.5 * (1.0 + (cplx(0, 1) * m(index(pair(x)))).real());
    sum += o.occupation[x];
  }
  o.density = count > 0 ? sum / count : 0.0;
  for (int x = 0; x < count; ++x)
    for (int y = 0; y < count; ++y) {
      if (x == y) {
        o.covariance(x, x) = o.occupation[x] * (1.0 - o.occupation[x]);
        continue;
      }
      // n_x n_y = (1 + i c c_x + i c c_y - c_a c_a' c_b c_b') / 4 for x < y, and n_x n_y = n_y n_x
      const int lo = std::min(x, y), hi = std::max(x, y);
      const double four = m(index(pair(lo) | pair(hi))).real();
      const double nn = 0.25 * (1.0 + (2.0 * o.occupation[x] - 1.0) + (2.0 * o.occupation[y] - 1.0) - four);
      o.covariance(x, y) = nn - o.occupation[x] * o.occupation[y];
    }
  return o;
}

FermionObservables exact_observables(const QuadraticModel& model, const RMat& gamma0, double t, int count) {
  if (model.hermitian_jumps.empty()) return observables(evolve_covariance(model, gamma0, t), count);
  const MomentHierarchy mh(model);
  return mh.observables(mh.evolve(mh.gaussian_moments(gamma0), t), count);
}

std::vector<FermionObservables> exact_observables_times(const QuadraticModel& model, const RMat& gamma0,
                                                       const std::vector<double>& times, int count) {
  std::vector<FermionObservables> out;
  if (model.hermitian_jumps.empty()) {
    for (double t : times) out.push_back(observables(evolve_covariance(model, gamma0, t), count));
    return out;
  }
  const MomentHierarchy mh(model);
  for (const Vec& m : mh.evolve_times(mh.gaussian_moments(gamma0), times)) out.push_back(mh.observables(m, count));
  return out;
}

FermionObservables exact_steady_observables(const QuadraticModel& model, int count) {
  if (model.hermitian_jumps.empty()) return observables(steady_state_covariance(model), count);
  const MomentHierarchy mh(model);
  return mh.observables(mh.steady_state(), count);
}

}  // namespace aqs
