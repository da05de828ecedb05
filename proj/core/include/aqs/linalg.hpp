#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace aqs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;

inline constexpr cplx I1{0.0, 1.0};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Mat kron(const Mat& a, const Mat& b);
SpMat kron(const SpMat& a, const SpMat& b);
SpMat sparse_identity(int n);

// Row-major vectorization: vec(|a><b|) = |a> (x) |b>.
Vec vec(const Mat& x);
Mat unvec(const Vec& v, int dim);

// Lift an operator acting on `support` (in the given order) to the full
// tensor-product space with per-site dimensions `dims` (site 0 most significant).
SpMat embed(const Mat& op, const std::vector<int>& support, const std::vector<int>& dims);

// Trace out everything after the first `keep_dim` block.
Mat partial_trace_tail(const Mat& x, int keep_dim, int trace_dim);

double trace_norm(const Mat& x);
double op_norm(const Mat& x);
double trace_norm_distance(const Mat& a, const Mat& b);
bool is_hermitian(const Mat& x, double tol = 1e-12);
double min_eigenvalue_hermitian(const Mat& x);

// Uhlmann fidelity (Tr sqrt(sqrt(s) r sqrt(s)))^2 for PSD inputs.
double fidelity(const Mat& rho, const Mat& sigma);

Mat basis_projector(int dim, int i);
Mat ket_bra(int dim, int i, int j);

}  // namespace aqs
