#include "aqs/jordan_wigner.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace aqs {

namespace {

Mat site_op(int modes, int x, const Mat& op, bool string) {
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Mat out = Mat::Identity(1, 1);
  for (int s = 0; s < modes; ++s) {
    if (s < x && string)
      out = kron(out, z);
    else if (s == x)
      out = kron(out, op);
    else
      out = kron(out, Mat::Identity(2, 2));
  }
  return out;
}

}  // namespace

Mat jw_annihilation(int modes, int x) {
  if (x < 0 || x >= modes) throw std::out_of_range("jw_annihilation: mode");
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;
  return site_op(modes, x, s, true);
}

Mat jw_majorana(int modes, int j) {
  const Mat a = jw_annihilation(modes, j / 2);
  if (j % 2 == 0) return a + a.adjoint();
  return cplx(0, -1) * (a - a.adjoint());
}

Mat jw_linear(const Vec& v) {
  const int modes = static_cast<int>(v.size()) / 2;
  const int d = 1 << modes;
  Mat out = Mat::Zero(d, d);
  for (int j = 0; j < v.size(); ++j)
    if (v(j) != 0.0) out += v(j) * jw_majorana(modes, j);
  return out;
}

Mat jw_quadratic(const RMat& m) {
  const int modes = static_cast<int>(m.rows()) / 2;
  const int d = 1 << modes;
  std::vector<Mat> c(m.rows());
  for (int j = 0; j < m.rows(); ++j) c[j] = jw_majorana(modes, j);
  Mat out = Mat::Zero(d, d);
  for (int j = 0; j < m.rows(); ++j)
    for (int k = 0; k < m.cols(); ++k)
      if (m(j, k) != 0.0) out += cplx(0, 0.25 * m(j, k)) * c[j] * c[k];
  return out;
}

LindbladGenerator jw_generator(const QuadraticModel& model) {
  model.validate();
  LindbladGenerator g;
  g.space.site_dims.assign(model.modes, 2);
  std::vector<int> all(model.modes);
  for (int x = 0; x < model.modes; ++x) all[x] = x;
  g.hamiltonian_terms.push_back({jw_quadratic(model.h), all});
  for (int a = 0; a < model.linear_jump_count(); ++a) g.jump_terms.push_back({jw_linear(model.linear_jumps.col(a)), all});
  for (const auto& q : model.hermitian_jumps) g.jump_terms.push_back({std::sqrt(q.rate) * jw_quadratic(q.m), all});
  return g;
}

RMat jw_covariance(const Mat& rho) {
  const int d = static_cast<int>(rho.rows());
  int modes = 0;
  while ((1 << modes) < d) ++modes;
  std::vector<Mat> c(2 * modes);
  for (int j = 0; j < 2 * modes; ++j) c[j] = jw_majorana(modes, j);
  RMat g = RMat::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < 2 * modes; ++j)
    for (int k = j + 1; k < 2 * modes; ++k) {
      const cplx v = cplx(0, 0.5) * (rho * (c[j] * c[k] - c[k] * c[j])).trace();
      g(j, k) = v.real();
      g(k, j) = -v.real();
    }
  return g;
}

Mat jw_fock_state(const std::vector<int>& occupation) {
  int idx = 0;
  for (int n : occupation) idx = 2 * idx + (n ? 1 : 0);
  return basis_projector(1 << occupation.size(), idx);
}

Mat jw_gaussian_thermal(const RMat& h) {
  Mat e = (-jw_quadratic(h)).exp();
  return e / e.trace();
}

}  // namespace aqs
