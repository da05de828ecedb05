#include "aqs/linalg.hpp"

#include <limits>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace aqs {

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

SpMat kron(const SpMat& a, const SpMat& b) {
  SpMat out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

SpMat sparse_identity(int n) {
  SpMat id(n, n);
  id.setIdentity();
  return id;
}

Vec vec(const Mat& x) {
  Vec v(x.size());
  const Eigen::Index d = x.cols();
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = x(i, j);
  return v;
}

Mat unvec(const Vec& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionMismatch("unvec: size is not dim^2");
  Mat x(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) x(i, j) = v(static_cast<Eigen::Index>(i) * dim + j);
  return x;
}

SpMat embed(const Mat& op, const std::vector<int>& support, const std::vector<int>& dims) {
  const int nsites = static_cast<int>(dims.size());
  int sub = 1;
  std::vector<bool> in_support(nsites, false);
  for (int s : support) {
    if (s < 0 || s >= nsites) throw DimensionMismatch("embed: support index out of range");
    if (in_support[s]) throw DimensionMismatch("embed: repeated support index");
    in_support[s] = true;
    sub *= dims[s];
  }
  if (op.rows() != sub || op.cols() != sub) throw DimensionMismatch("embed: operator does not match support dims");

  std::vector<long> stride(nsites, 1);
  for (int s = nsites - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];
  const long total = nsites ? stride[0] * dims[0] : 1;

  // offset of each local basis index inside the full index
  std::vector<long> local_offset(sub, 0);
  for (int a = 0; a < sub; ++a) {
    int rem = a;
    long off = 0;
    for (int k = static_cast<int>(support.size()) - 1; k >= 0; --k) {
      const int s = support[k];
      off += static_cast<long>(rem % dims[s]) * stride[s];
      rem /= dims[s];
    }
    local_offset[a] = off;
  }

  std::vector<int> rest_sites;
  for (int s = 0; s < nsites; ++s)
    if (!in_support[s]) rest_sites.push_back(s);
  const long rest_count = total / sub;

  std::vector<Eigen::Triplet<cplx>> trip;
  long nnz = 0;
  for (int a = 0; a < sub; ++a)
    for (int b = 0; b < sub; ++b)
      if (op(a, b) != cplx(0.0)) ++nnz;
  trip.reserve(static_cast<size_t>(nnz * rest_count));

  std::vector<int> digit(rest_sites.size(), 0);
  for (long r = 0; r < rest_count; ++r) {
    long base = 0;
    for (size_t k = 0; k < rest_sites.size(); ++k) base += digit[k] * stride[rest_sites[k]];
    for (int a = 0; a < sub; ++a)
      for (int b = 0; b < sub; ++b) {
        const cplx v = op(a, b);
        if (v != cplx(0.0)) trip.emplace_back(base + local_offset[a], base + local_offset[b], v);
      }
    for (int k = static_cast<int>(rest_sites.size()) - 1; k >= 0; --k) {
      if (++digit[k] < dims[rest_sites[k]]) break;
      digit[k] = 0;
    }
  }
  SpMat out(total, total);
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

Mat partial_trace_tail(const Mat& x, int keep_dim, int trace_dim) {
  if (x.rows() != static_cast<Eigen::Index>(keep_dim) * trace_dim || x.cols() != x.rows())
    throw DimensionMismatch("partial_trace_tail: dimension mismatch");
  Mat out = Mat::Zero(keep_dim, keep_dim);
  for (int i = 0; i < keep_dim; ++i)
    for (int j = 0; j < keep_dim; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < trace_dim; ++k) acc += x(i * trace_dim + k, j * trace_dim + k);
      out(i, j) = acc;
    }
  return out;
}

double trace_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  if (is_hermitian(x, 1e-13)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Mat> svd(x);
  return svd.singularValues().sum();
}

double op_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(x);
  return svd.singularValues()(0);
}

double trace_norm_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("trace_norm_distance");
  return trace_norm(a - b);
}

bool is_hermitian(const Mat& x, double tol) {
  if (x.rows() != x.cols()) return false;
  return (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue_hermitian(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {
// Eigenvalues below the eigensolver's resolution are set to zero before the square root;
// otherwise rounding noise of order eps contributes sqrt(eps) per eigenvalue.
RVec floored(RVec ev) {
  const double floor = 10.0 * ev.size() * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
  for (auto& v : ev) v = v > floor ? v : 0.0;
  return ev;
}

Mat psd_sqrt(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()));
  RVec ev = floored(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace

double fidelity(const Mat& rho, const Mat& sigma) {
  Mat s = psd_sqrt(sigma);
  Mat inner = s * rho * s;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  double tr = floored(es.eigenvalues()).cwiseSqrt().sum();
  return tr * tr;
}

Mat basis_projector(int dim, int i) { return ket_bra(dim, i, i); }

Mat ket_bra(int dim, int i, int j) {
  Mat m = Mat::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

}  // namespace aqs
