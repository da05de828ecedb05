#pragma once

#include <vector>

#include "aqs/lindblad.hpp"

namespace aqs {

// Hypercubic lattice, sites indexed row-major with axis 0 most significant.
struct Lattice {
  std::vector<int> extent;
  std::vector<bool> periodic;  // empty means open on every axis

  Lattice() = default;
  explicit Lattice(std::vector<int> ext, std::vector<bool> per = {});

  int dimension() const { return static_cast<int>(extent.size()); }
  int site_count() const;
  std::vector<int> coords(int site) const;
  int index(const std::vector<int>& c) const;
  int distance(int a, int b) const;
};

using Support = std::vector<int>;

int set_distance(const Lattice& lat, const Support& a, const Support& b);
int diameter(const Lattice& lat, const Support& s);
bool overlaps(const Support& a, const Support& b);

struct SupportFamily {
  std::vector<Support> supports;

  // number of members meeting s
  int boundary(const Support& s) const;
  int degree() const;  // Z = max_alpha boundary(S_alpha)
  int range(const Lattice& lat) const;  // a = max diam
  double eta(const Support& s) const { return static_cast<double>(boundary(s)) / degree(); }
};

// One member per Hamiltonian term and per jump term.
SupportFamily support_family(const LindbladGenerator& gen);

double lr_bound(const Lattice& lat, const SupportFamily& fam, const Support& s_k, const Support& s_o, double norm_k,
                double t);

// Throws std::invalid_argument if diam(X) or diam(Y) exceeds the family range.
double lr_bound_two(const Lattice& lat, const SupportFamily& fam, const Support& x, const Support& y,
                    const Support& s_o, double norm_x, double norm_y, double t);

// xi^{(m,k)}_{lambda,x}(T) by exact summation over all k-tuples of members of
// `tilde` (via the k-fold convolution of the distance histogram).
double lattice_sum_xi(const Lattice& lat, const SupportFamily& tilde, const Support& s, double lambda, double x,
                      double t, int m, int k);

// X_p(lambda) = sum_{n>=0} n^p e^{-n/lambda}
double series_x(int p, double lambda);
// Y_m(z) = sum_{n=0}^{ceil z} n^m (n + d - 1)^{d - 1}
double series_y(int m, double z, int dim);

double nu_bound(double lambda, double t, int m, double z_tilde, int s_size, int dim);

// max(x,1)^k k^m nu0^{k-m} nu1^m
double xi_upper_bound(double lambda, double x, double t, int m, int k, double z_tilde, int s_size, int dim);

}  // namespace aqs
