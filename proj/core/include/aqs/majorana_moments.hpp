#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aqs/gaussian.hpp"

namespace aqs {

// Polynomial in Majorana operators; key bit j set means c_j appears, monomials
// are ordered products c_{s1} c_{s2} ... with s1 < s2 < ...
using MajoranaMask = std::uint64_t;
using MajoranaPoly = std::map<MajoranaMask, cplx>;

MajoranaPoly majorana_product(const MajoranaPoly& a, const MajoranaPoly& b);
MajoranaPoly majorana_linear(const Vec& v);
MajoranaPoly majorana_quadratic(const RMat& m);  // (i/4) sum m_jk c_j c_k

// Heisenberg generator i[H, X] + sum L^dag X L - (1/2){L^dag L, X} for the model's jumps.
MajoranaPoly heisenberg_generator(const QuadraticModel& model, const MajoranaPoly& x);

// Closed linear dynamics of the even moments <c_S>, 0 < |S| <= 4, under a quadratic model.
// Hermitian quadratic jumps destroy Gaussianity, so four-point functions are not
// fixed by Gamma; this tracks them exactly. Size grows as (2n)^4 / 24.
class MomentHierarchy {
 public:
  explicit MomentHierarchy(const QuadraticModel& model);

  int size() const { return static_cast<int>(monomials_.size()); }
  int modes() const { return modes_; }

  // Moments of the Gaussian state with covariance gamma (Wick).
  Vec gaussian_moments(const RMat& gamma) const;
  Vec evolve(const Vec& m0, double t) const;
  // Moments at increasing times; equal increments share one propagator.
  std::vector<Vec> evolve_times(const Vec& m0, const std::vector<double>& times) const;
  Vec steady_state() const;

  FermionObservables observables(const Vec& m, int count = -1) const;

 private:
  int index(MajoranaMask mask) const;

  int modes_;
  std::vector<MajoranaMask> monomials_;  // index 0 is the identity
  std::map<MajoranaMask, int> lookup_;
  Mat generator_;  // d m / dt = generator_ m, row 0 zero
};

// Density and occupation covariance of a model's evolution from a Gaussian initial state; uses
// the covariance alone for models without Hermitian jumps and the moment hierarchy otherwise.
FermionObservables exact_observables(const QuadraticModel& model, const RMat& gamma0, double t, int count = -1);
std::vector<FermionObservables> exact_observables_times(const QuadraticModel& model, const RMat& gamma0,
                                                       const std::vector<double>& times, int count = -1);
FermionObservables exact_steady_observables(const QuadraticModel& model, int count = -1);

}  // namespace aqs
