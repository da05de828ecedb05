#pragma once

#include "aqs/gaussian.hpp"
#include "aqs/lindblad.hpp"

namespace aqs {

// Jordan-Wigner with mode 0 as the most significant qubit:
// a_x = Z_0 ... Z_{x-1} sigma^-_x, sigma^- = |0><1|, |1> occupied.
Mat jw_annihilation(int modes, int x);
Mat jw_majorana(int modes, int j);

// Dense operator of sum_j v_j c_j, and of (i/4) sum_jk m_jk c_j c_k.
Mat jw_linear(const Vec& v);
Mat jw_quadratic(const RMat& m);

// One qubit per mode; every term acts on the full register.
LindbladGenerator jw_generator(const QuadraticModel& model);

RMat jw_covariance(const Mat& rho);

// Fock state |n_0 ... n_{N-1}><...|
Mat jw_fock_state(const std::vector<int>& occupation);

// Normalized e^{-H} for H = (i/4) sum h c c, a Gaussian state with covariance -tanh-like spectrum.
Mat jw_gaussian_thermal(const RMat& h);

}  // namespace aqs
